#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tricrit::cli {

enum ExitCode : int {
  kOk = 0,
  kUsageError = 1,
  kDataError = 2,
  kInconclusive = 3,
};

/// Runs one command line (program name excluded). Results go to `out` as
/// JSON, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SweepRow {
  double x = 0.0;
  std::optional<double> f_a;
};

/// F_a of the GHZ/W/W-tilde mixture on `steps` evenly spaced points of
/// [from, to], endpoints included. Requires 1/3 < from <= to <= 1.
std::vector<SweepRow> sweep_ghzw(double from, double to, int steps);

/// Header `x,F_a`; x with six decimals, F_a with nine significant digits,
/// `inconclusive` where the approximation is undefined.
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace tricrit::cli
