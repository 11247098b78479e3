#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bubblelab/bubble.hpp"
#include "bubblelab/geometry.hpp"

namespace bubblelab {

/// Profile of (Y, G_c) realized as a surface of revolution in R^3:
/// r(s) = c f(s), x3(s) = int sqrt(1 - c^2 f'(s)^2) ds, valid while c|f'| < 1.
struct RevolutionCurve {
    std::vector<double> s, r, x3;
    int sample_count() const { return static_cast<int>(s.size()); }

    /// Chord-based unit-speed defect max |(dr^2 + dx3^2)/ds^2 - 1|.
    double max_unit_speed_defect() const;
};

/// 1 / max |f'| over [a, b]; absent when f' vanishes identically (flat
/// cylinder, any c embeds).
std::optional<double> max_c_for_embedding(const WarpedGeometry& g, double a, double b,
                                          int grid_n = 4000);

/// Samples the revolution embedding on n_samples uniform nodes; x3 by
/// cumulative Simpson. Throws InvalidInputError naming the violating s when
/// c |f'(s)| >= 1 somewhere in [a, b].
RevolutionCurve embed_revolution(const WarpedGeometry& g, double a, double b, int n_samples);

struct TriangleMesh {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::array<int, 3>> triangles;  // zero-based

    int euler_characteristic() const;
    double signed_volume() const;  // divergence theorem; > 0 for outward orientation
};

/// Open revolution band: n_s rings of n_theta vertices, 2 (n_s - 1) n_theta
/// triangles, outward orientation.
TriangleMesh revolution_mesh(const RevolutionCurve& curve, int n_theta);

/// Closed torus for one bubble: the closed profile loop (s, +-u) is pushed
/// off the embedded Y along its unit normal by the height y, giving
/// n_profile * n_theta vertices and 2 n_profile n_theta triangles. This is a
/// visualization model: the bubble itself lives in Y x R in R^4.
TriangleMesh bubble_torus_mesh(const BubbleProfile& bp, const WarpedGeometry& g, int n_profile,
                               int n_theta);

/// ASCII OBJ with v/f records only; coordinates are written with %.17g so a
/// re-parse reproduces them bit-exactly.
void write_obj(const TriangleMesh& mesh, const std::string& path);
TriangleMesh read_obj(const std::string& path);

/// Closed profile curve C_u in the s-y plane, fixed 800x600 viewBox.
void write_profile_svg(const BubbleProfile& bp, const std::string& path);

}  // namespace bubblelab
