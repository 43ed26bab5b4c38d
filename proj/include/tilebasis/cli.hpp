#pragma once

/// \file cli.hpp
/// The tilebasis command line, callable in-process.
///
///   tilebasis verify      <tile-file> | --gen SPEC [--J n]
///   tilebasis patterns    <tile-file> | --gen SPEC [--J n]
///   tilebasis bounds      <input> (--shifts A | --x X)
///   tilebasis search      <input> [--method vandermonde|admissible|optimizer] [budgets] [--seed s]
///   tilebasis certify     <input> --kind kronecker|admissible|vandermonde|finite|two-tile [--out FILE]
///   tilebasis verify-cert <certificate-file>
///   tilebasis roundtrip   <input> (--shifts A | --x X) [--N 8] [--grid 256] [--trials 50] [--seed 1]
///   tilebasis gallery     <name> [--k --q --J --divisible --bits] [--boxes]
///
/// Exit codes: 0 success or certified, 1 usage or input error, 2 structural
/// failure (not a multi-tile, singular shifts), 3 search or certificate
/// failure.

#include <ostream>
#include <string>
#include <vector>

namespace tilebasis::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitStructural = 2;
inline constexpr int kExitSearchFailure = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tilebasis::cli
