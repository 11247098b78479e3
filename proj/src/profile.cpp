#include "bubblelab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "bubblelab/errors.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab {

namespace {

S0Detection detect_s0_impl(const std::function<double(double)>& phi_s, double s_max) {
    constexpr int kScan = 8192;
    const double h = s_max / kScan;
    S0Detection out;
    double prev = phi_s(h * 1e-3);
    for (int i = 1; i <= kScan; ++i) {
        const double s = i * h;
        const double v = phi_s(s);
        if (prev > 0.0 && v <= 0.0) {
            const double root = (v == 0.0)
                                    ? s
                                    : num::bisect_root(phi_s, s - h, s, 1e-12);
            out.s0 = root;
            break;
        }
        prev = v;
    }
    if (!out.s0) return out;
    const double s0 = *out.s0;
    // phi_s > 0 strictly before s0 and < 0 on an interval after it.
    bool ok = true;
    for (int i = 1; i < 512; ++i) {
        const double s = s0 * i / 512.0;
        if (phi_s(s) <= 0.0 && s < s0 - 1e-9) {
            ok = false;
            break;
        }
    }
    const double span = std::min(0.2 * s0, 0.9 * (s_max - s0));
    if (span > 0) {
        int neg = 0;
        for (int i = 1; i <= 16; ++i)
            if (phi_s(s0 + span * i / 16.0) < 0.0) ++neg;
        if (neg < 12) ok = false;
    }
    out.pattern_ok = ok;
    return out;
}

void attach_s0(PhiProfile& p) {
    const S0Detection d = detect_s0_impl(p.phi_s, p.s_max);
    p.s0 = d.s0;
    p.s0_pattern_ok = d.pattern_ok;
}

}  // namespace

PhiProfile make_builtin_profile(const std::string& name, double eps) {
    if (!(eps > 0.0) || eps >= 0.5)
        throw InvalidInputError("builtin profile: eps must lie in (0, 0.5)");
    PhiProfile p;
    if (name == "ex1") {
        p.kind = ProfileKind::builtin_ex1;
        p.s_max = M_PI - eps;
        p.phi = [](double s) { return std::sin(s); };
        p.phi_s = [](double s) { return std::cos(s); };
        p.phi_ss = [](double s) { return -std::sin(s); };
    } else if (name == "ex2") {
        p.kind = ProfileKind::builtin_ex2;
        p.s_max = 1.0 - eps;
        p.phi = [](double s) { return s - s * s * s; };
        p.phi_s = [](double s) { return 1.0 - 3.0 * s * s; };
        p.phi_ss = [](double s) { return -6.0 * s; };
    } else {
        throw InvalidInputError("unknown builtin profile '" + name + "' (expected ex1 or ex2)");
    }
    attach_s0(p);
    return p;
}

PhiProfile make_closed_form_profile(std::function<double(double)> phi,
                                    std::function<double(double)> phi_s,
                                    std::function<double(double)> phi_ss, double s_max) {
    if (!(s_max > 0.0)) throw InvalidInputError("profile: s_max must be positive");
    PhiProfile p;
    p.kind = ProfileKind::user_closed_form;
    p.s_max = s_max;
    p.phi = std::move(phi);
    p.phi_s = std::move(phi_s);
    p.phi_ss = std::move(phi_ss);
    attach_s0(p);
    return p;
}

PhiProfile make_sampled_profile(std::vector<double> s, std::vector<double> phi) {
    if (s.size() != phi.size() || s.size() < 8)
        throw InvalidInputError("sampled profile: need at least 8 (s, phi) pairs");
    std::vector<std::size_t> order(s.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a] < s[b]; });
    std::vector<double> xs, ys;
    xs.reserve(s.size());
    ys.reserve(s.size());
    for (const std::size_t i : order) {
        xs.push_back(s[i]);
        ys.push_back(phi[i]);
    }
    bool has_zero = false;
    for (const double x : xs)
        if (std::abs(x) < 1e-12) has_zero = true;
    if (!has_zero) throw InvalidInputError("sampled profile: samples must include s = 0");
    const double s_max = std::min(-xs.front(), xs.back());
    if (!(s_max > 0.0))
        throw InvalidInputError("sampled profile: samples must span a symmetric interval around 0");
    auto spline = std::make_shared<num::CubicSpline>(std::move(xs), std::move(ys));
    PhiProfile p;
    p.kind = ProfileKind::user_sampled;
    p.s_max = s_max;
    p.phi = [spline](double x) { return spline->eval(x); };
    p.phi_s = [spline](double x) { return spline->deriv(x); };
    p.phi_ss = [spline](double x) { return spline->deriv2(x); };
    attach_s0(p);
    return p;
}

PhiProfile load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty profile CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "s,phi")
        throw InvalidInputError("profile CSV must start with header 's,phi', got '" + line + "'");
    std::vector<double> s, phi;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
            throw InvalidInputError("profile CSV: malformed row '" + line + "'");
        s.push_back(std::stod(a));
        phi.push_back(std::stod(b));
    }
    return make_sampled_profile(std::move(s), std::move(phi));
}

std::vector<ProfileDiagnostic> validate_profile(const PhiProfile& p) {
    std::vector<ProfileDiagnostic> out;
    const double tol = p.validation_tol();
    constexpr int kGrid = 2001;

    double odd_defect = 0.0, scale = 0.0;
    for (int i = 1; i <= kGrid; ++i) {
        const double s = p.s_max * i / (kGrid + 1.0);
        if (s < 1e-6) continue;
        odd_defect = std::max(odd_defect, std::abs(p.phi(s) + p.phi(-s)));
        scale = std::max(scale, std::abs(p.phi(s)));
    }
    if (std::abs(p.phi(0.0)) > tol || odd_defect > tol * std::max(1.0, scale)) {
        std::ostringstream msg;
        msg << "phi is not odd: max |phi(s)+phi(-s)| = " << std::max(odd_defect, std::abs(p.phi(0.0)));
        out.push_back({"not-odd", msg.str()});
    }

    const double slope0 = p.phi_s(0.0);
    const double slope_tol = tol;
    if (std::abs(slope0 - 1.0) > slope_tol) {
        std::ostringstream msg;
        msg << "phi'(0) = " << slope0 << " (must be 1)";
        out.push_back({"wrong-slope-at-zero", msg.str()});
    }

    // sign pattern: phi > 0 on (0, s0] and phi_s > 0 on [0, s0), phi_s(s0) = 0;
    // without an s0, phi must stay positive on (0, s_max).
    bool sign_ok = true;
    std::string sign_msg;
    const double upper = p.s0 ? *p.s0 : p.s_max * (1.0 - 1e-9);
    for (int i = 1; i <= kGrid && sign_ok; ++i) {
        const double s = upper * i / kGrid;
        if (s < 1e-6) continue;
        if (p.phi(s) <= 0.0) {
            sign_ok = false;
            std::ostringstream msg;
            msg << "phi(" << s << ") <= 0 inside (0, " << upper << "]";
            sign_msg = msg.str();
        }
    }
    if (sign_ok && p.s0) {
        for (int i = 0; i < kGrid && sign_ok; ++i) {
            const double s = *p.s0 * i / kGrid;
            if (p.phi_s(s) <= 0.0 && s < *p.s0 * (1.0 - 1e-9)) {
                sign_ok = false;
                std::ostringstream msg;
                msg << "phi_s(" << s << ") <= 0 before s0";
                sign_msg = msg.str();
            }
        }
        if (sign_ok && std::abs(p.phi_s(*p.s0)) > std::sqrt(slope_tol)) {
            sign_ok = false;
            sign_msg = "phi_s(s0) does not vanish";
        }
    }
    if (!sign_ok) out.push_back({"sign-violation", sign_msg});
    return out;
}

S0Detection detect_s0(const PhiProfile& p) { return detect_s0_impl(p.phi_s, p.s_max); }

}  // namespace bubblelab
