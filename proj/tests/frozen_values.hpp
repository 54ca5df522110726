#pragma once

// Expected values produced by tests/oracle/frozen_values.py (sympy-based
// brute force, independent of the library code paths).
namespace geh::frozen {

inline constexpr unsigned long long kPrimeCount1e6 = 78498;
inline constexpr double kPsi1e5Shift2 = 131522.91254363762;
inline constexpr double kPsi1e4Shift6 = 26650.659834763868;
inline constexpr double kPsiProgression100Shift2Mod3Class2 = 91.225238598818379;
inline constexpr double kPartialSumPhi2OverPhi1e2 = 74.986362419021049;
inline constexpr double kPartialSumPhi2OverPhi1e3 = 748.29354425185988;
inline constexpr double kSingularSeries2At1e6 = 1.3203237211796763;
inline constexpr double kSingularSeries2At1e5 = 1.3203246909334605;
inline constexpr double kEhSup1e4Mod7 = 86.035213730442592;
inline constexpr double kEhSup1e4Mod1 = 162.47544971179377;

}  // namespace geh::frozen
