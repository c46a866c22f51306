#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ckn {

inline constexpr const char* kVersion = "0.1.0";

/// Serializes with sorted keys and all floats in the fixed 17-significant-digit
/// format, so repeated runs emit byte-identical documents. Non-finite numbers
/// become null.
std::string dump_deterministic(const nlohmann::json& j);

/// Standard report envelope: {command, discrepancy_notes, inputs, results, version}.
nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs,
                           const nlohmann::json& results, const std::vector<std::string>& notes);

/// Formula-clarification notes attached to any report whose code path relies
/// on the corrected form.
namespace notes {

inline constexpr const char* kHardyShiftSign =
    "hardy_reduction: the exponent shift is -mu1/2, i.e. tau(mu_tilde) = tau(mu1,mu2) - mu1/2; "
    "the opposite sign fails the substitution identity";

inline constexpr const char* kPowerLogPlainCoefficient =
    "apply_power_log: the non-log coefficient is 2*tau + N - 2 - mu1, the unique form that "
    "vanishes at the double root tau_0 (checked by finite differences)";

inline constexpr const char* kSerrinExponentVariants =
    "critical_exponents: q_sharp = (N+theta)/(-tau_+) - 1 ignores the drift weight; the "
    "divergence gate uses q_sharp_measure = (N-mu1+theta)/(-tau_+) - 1 (equal for mu1 = 0)";

inline constexpr const char* kTerminationForm =
    "bootstrap: the termination test p*tau_j + theta + 2 <= tau_- is the weighted-mass "
    "divergence; a plain -N threshold without the mu1 correction is not equivalent for mu1 != 0";

inline constexpr const char* kAsymptoteNormalization =
    "singular_coefficient: the asymptote is normalized by r^{tau_-(mu1,mu2)}, which equals "
    "r^{tau_-(mu_tilde) + mu1/2} under the Hardy reduction";

inline constexpr const char* kCriticalLogForm =
    "fundamental solutions: the logarithmic Phi appears exactly when the discriminant vanishes; "
    "for mu2 = 0 that happens only at mu1 = N - 2";

} // namespace notes

} // namespace ckn
