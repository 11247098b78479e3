#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bubblelab {

enum class ProfileKind { builtin_ex1, builtin_ex2, user_closed_form, user_sampled };

/// The odd generating function of the warped metric, with its first two
/// derivatives, on the symmetric interval I = (-s_max, s_max).
///
/// Required shape (checked by validate_profile):
///   phi(0) = 0, phi'(0) = 1, phi odd, phi > 0 on (0, s0].
/// s0 is the first local maximum of phi on (0, s_max), when one exists.
struct PhiProfile {
    ProfileKind kind = ProfileKind::user_closed_form;
    double s_max = 0.0;
    std::function<double(double)> phi, phi_s, phi_ss;
    std::optional<double> s0;
    // true when phi_s > 0 before s0 and < 0 on an interval after it
    // (the first-inflection hypothesis pattern); meaningless without s0.
    bool s0_pattern_ok = false;

    double validation_tol() const {
        return kind == ProfileKind::user_sampled ? 1e-4 : 1e-8;
    }
};

struct ProfileDiagnostic {
    std::string code;  // not-odd | wrong-slope-at-zero | sign-violation
    std::string message;
};

struct S0Detection {
    std::optional<double> s0;
    bool pattern_ok = false;
};

/// Builds one of the two closed-form profiles:
///   ex1: phi = sin s   on (-(pi - eps), pi - eps),  s0 = pi/2
///   ex2: phi = s - s^3 on (-(1 - eps), 1 - eps),    s0 = 1/sqrt(3)
/// eps defaults to 0.05 and is exposed because only the interval margin
/// depends on it.
PhiProfile make_builtin_profile(const std::string& name, double eps = 0.05);

/// Wraps user-supplied closed forms; s0 is detected automatically.
PhiProfile make_closed_form_profile(std::function<double(double)> phi,
                                    std::function<double(double)> phi_s,
                                    std::function<double(double)> phi_ss, double s_max);

/// Builds a profile from sampled (s, phi) pairs via a cubic spline whose
/// analytic derivatives serve as phi_s and phi_ss. The sample set must
/// contain s = 0 and is restricted to a symmetric interval.
PhiProfile make_sampled_profile(std::vector<double> s, std::vector<double> phi);

/// Reads a two-column CSV with header "s,phi".
PhiProfile load_profile_csv(const std::string& path);

/// Empty iff all profile invariants hold; at most one diagnostic per
/// violated criterion. Never throws on bad profiles.
std::vector<ProfileDiagnostic> validate_profile(const PhiProfile& p);

/// First zero of phi_s on (0, s_max) with a sign change, located by
/// bracketing bisection to 1e-12, plus the hypothesis-pattern flag.
/// s0 is absent when phi_s > 0 on the whole interval.
S0Detection detect_s0(const PhiProfile& p);

}  // namespace bubblelab
