#pragma once

namespace freelunch {

inline constexpr const char* kVersion = "0.1.0";

// PRNG algorithm identifier embedded in every artifact that consumed randomness.
inline constexpr const char* kPrngId = "mt19937_64/u53";

} // namespace freelunch
