#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "ccl/fvref.hpp"
#include "ccl/problems.hpp"

namespace ccl::cli {

enum class Mode { kPoint, kGrid, kReconstruct, kTable, kFvCompare };

struct RunConfig {
  std::string problem = "burgers_box";  // catalog name or path to a .json file
  Mode mode = Mode::kPoint;
  double x = 0.0;
  double t = 1.0;
  std::optional<double> x_lo, x_hi, t_lo, t_hi;  // default to the problem's domain
  std::size_t nx = 11;
  std::size_t nt = 11;
  std::size_t samples = 401;   // reconstruct output samples
  std::size_t ncells = 1000;   // fv-compare
  bool parallel = false;
  std::size_t workers = 0;     // 0: CCL_WORKERS or hardware concurrency
  std::string output;          // empty: stdout
  std::optional<double> rel_tol;
  std::optional<double> bvp_tol;
  std::optional<double> max_error;  // table gate
  double shock_exclusion = 1e-9;
};

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kGateFailure = 4 };

/// Loads a catalog entry or a JSON problem file.  The returned reference
/// stays valid for the life of the process.
const ProblemSpec& resolve_problem(const std::string& name_or_path);

std::string format_double(double v);

void cmd_point(const RunConfig& cfg, std::ostream& out);
void cmd_grid(const RunConfig& cfg, std::ostream& out);
void cmd_reconstruct(const RunConfig& cfg, std::ostream& out);
/// Returns false when max_error is set and exceeded.
bool cmd_table(const RunConfig& cfg, std::ostream& out);

struct FvComparison {
  FvGrid grid;
  std::vector<double> pointwise;  // at cell centers
  double l1 = 0.0;                // sum |fv - pointwise| dx
};
FvComparison fv_compare(const RunConfig& cfg);
void cmd_fv_compare(const RunConfig& cfg, std::ostream& out);

/// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ccl::cli
