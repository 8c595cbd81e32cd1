#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "psihilfer/errors.hpp"
#include "psihilfer/picard.hpp"

namespace psihilfer::cli {

enum ExitCode : int { ok = 0, validation = 2, numerical = 3, io = 4 };

int exit_code_for(ErrorKind kind);

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 17 significant digits, '.' decimal point, independent of the locale.
std::string format_number(double value);

/// Header "t,w,y"; y at t = a is left empty when zeta < 1.
void write_solution_csv(std::ostream& out, const WeightedGridFunction& f);

/// key = value lines.
std::string format_report(const SolveReport& report, double zeta);

}  // namespace psihilfer::cli
