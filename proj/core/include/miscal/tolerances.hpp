#pragma once

namespace miscal {

// Probability masses must sum to 1 within this absolute tolerance.
inline constexpr double kMassTol = 1e-9;

// Cost identities ((m-j*)/j* = P/L and friends) hold to this relative tolerance.
inline constexpr double kCostRelTol = 1e-9;

// Slack used when comparing calibration errors against a budget and when
// classifying a clinical utility as harmful.
inline constexpr double kNumericEps = 1e-12;

}  // namespace miscal
