#include "bubblelab/embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "bubblelab/errors.hpp"
#include "bubblelab/numerics.hpp"

namespace bubblelab {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Closed profile loop of a bubble: quarter curve reflected through both
// symmetry planes, counterclockwise, 4N points (corners not duplicated).
std::vector<std::array<double, 2>> closed_profile_loop(const BubbleProfile& bp) {
    const int N = bp.node_count() - 1;
    std::vector<std::array<double, 2>> loop;
    loop.reserve(static_cast<std::size_t>(4 * N));
    for (int j = 0; j < N; ++j)
        loop.push_back({bp.s[static_cast<std::size_t>(j)], bp.u[static_cast<std::size_t>(j)]});
    for (int j = N; j > 0; --j)
        loop.push_back({bp.s[static_cast<std::size_t>(j)], -bp.u[static_cast<std::size_t>(j)]});
    for (int j = 0; j < N; ++j)
        loop.push_back({-bp.s[static_cast<std::size_t>(j)], -bp.u[static_cast<std::size_t>(j)]});
    for (int j = N; j > 0; --j)
        loop.push_back({-bp.s[static_cast<std::size_t>(j)], bp.u[static_cast<std::size_t>(j)]});
    return loop;
}
}  // namespace

double RevolutionCurve::max_unit_speed_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double ds = s[i + 1] - s[i];
        const double dr = r[i + 1] - r[i];
        const double dz = x3[i + 1] - x3[i];
        worst = std::max(worst, std::abs((dr * dr + dz * dz) / (ds * ds) - 1.0));
    }
    return worst;
}

std::optional<double> max_c_for_embedding(const WarpedGeometry& g, double a, double b, int grid_n) {
    double best = 0.0, best_s = a;
    for (int i = 0; i <= grid_n; ++i) {
        const double s = a + (b - a) * i / grid_n;
        const double v = std::abs(g.f_s(s));
        if (v > best) {
            best = v;
            best_s = s;
        }
    }
    const double h = (b - a) / grid_n;
    const double s_ref = num::golden_max([&g](double s) { return std::abs(g.f_s(s)); },
                                         std::max(a, best_s - h), std::min(b, best_s + h), 1e-13);
    best = std::max(best, std::abs(g.f_s(s_ref)));
    if (best < 1e-300) return std::nullopt;
    return 1.0 / best;
}

RevolutionCurve embed_revolution(const WarpedGeometry& g, double a, double b, int n_samples) {
    if (n_samples < 4) throw InvalidInputError("embed_revolution: need at least 4 samples");
    const double c = g.c();
    // locate any validity violation first so the error can name it
    for (int i = 0; i <= 4000; ++i) {
        const double s = a + (b - a) * i / 4000.0;
        if (c * std::abs(g.f_s(s)) >= 1.0) {
            std::ostringstream msg;
            msg << "embed_revolution: c |f'(s)| = " << c * std::abs(g.f_s(s)) << " >= 1 at s = " << s
                << "; reduce c below " << 1.0 / std::abs(g.f_s(s));
            throw InvalidInputError(msg.str());
        }
    }
    RevolutionCurve curve;
    const int cells = n_samples - 1;
    curve.s.resize(static_cast<std::size_t>(n_samples));
    curve.r.resize(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        curve.s[static_cast<std::size_t>(i)] = a + (b - a) * i / cells;
        curve.r[static_cast<std::size_t>(i)] = c * g.f(curve.s[static_cast<std::size_t>(i)]);
    }
    auto x3p = [&](double s) {
        const double w = c * g.f_s(s);
        return std::sqrt(1.0 - w * w);
    };
    curve.x3 = num::cumulative_simpson(x3p, a, b, cells);
    return curve;
}

int TriangleMesh::euler_characteristic() const {
    // count undirected edges
    std::vector<std::pair<int, int>> edges;
    edges.reserve(triangles.size() * 3);
    for (const auto& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            int u = t[static_cast<std::size_t>(e)], v = t[static_cast<std::size_t>((e + 1) % 3)];
            if (u > v) std::swap(u, v);
            edges.emplace_back(u, v);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(triangles.size());
}

double TriangleMesh::signed_volume() const {
    double acc = 0.0;
    for (const auto& t : triangles) {
        const auto& a = vertices[static_cast<std::size_t>(t[0])];
        const auto& b = vertices[static_cast<std::size_t>(t[1])];
        const auto& c = vertices[static_cast<std::size_t>(t[2])];
        acc += (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                a[2] * (b[0] * c[1] - b[1] * c[0])) /
               6.0;
    }
    return acc;
}

namespace {
// shared quad tessellation: ring index i (possibly closed), angular index j
TriangleMesh revolve(const std::vector<std::array<double, 2>>& rz,
                     const std::vector<std::array<double, 2>>& normal_rz,
                     const std::vector<double>& offset, int n_theta, bool closed) {
    const int n_s = static_cast<int>(rz.size());
    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(n_s * n_theta));
    for (int i = 0; i < n_s; ++i) {
        const std::size_t I = static_cast<std::size_t>(i);
        const double r = rz[I][0] + (offset.empty() ? 0.0 : offset[I] * normal_rz[I][0]);
        const double z = rz[I][1] + (offset.empty() ? 0.0 : offset[I] * normal_rz[I][1]);
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * kPi * j / n_theta;
            mesh.vertices.push_back({r * std::cos(th), r * std::sin(th), z});
        }
    }
    const int rows = closed ? n_s : n_s - 1;
    for (int i = 0; i < rows; ++i) {
        const int in = (i + 1) % n_s;
        for (int j = 0; j < n_theta; ++j) {
            const int jn = (j + 1) % n_theta;
            const int a = i * n_theta + j, b = i * n_theta + jn;
            const int c = in * n_theta + j, d = in * n_theta + jn;
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({b, d, c});
        }
    }
    return mesh;
}
}  // namespace

TriangleMesh revolution_mesh(const RevolutionCurve& curve, int n_theta) {
    if (n_theta < 3) throw InvalidInputError("revolution_mesh: n_theta must be >= 3");
    std::vector<std::array<double, 2>> rz(curve.s.size());
    for (std::size_t i = 0; i < curve.s.size(); ++i) rz[i] = {curve.r[i], curve.x3[i]};
    TriangleMesh mesh = revolve(rz, {}, {}, n_theta, false);
    if (mesh.signed_volume() < 0.0)
        for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
    return mesh;
}

TriangleMesh bubble_torus_mesh(const BubbleProfile& bp, const WarpedGeometry& g, int n_profile,
                               int n_theta) {
    if (n_profile < 4 || n_theta < 3)
        throw InvalidInputError("bubble_torus_mesh: need n_profile >= 4 and n_theta >= 3");
    // embed Y over [-s1, s1] to get r(s), x3(s) and the profile-plane normal
    const RevolutionCurve yc = embed_revolution(g, -bp.s1, bp.s1, 4001);
    num::CubicSpline r_of_s(yc.s, yc.r);
    num::CubicSpline x3_of_s(yc.s, yc.x3);

    const auto loop = closed_profile_loop(bp);
    const int total = static_cast<int>(loop.size());
    std::vector<std::array<double, 2>> rz(static_cast<std::size_t>(n_profile));
    std::vector<std::array<double, 2>> nrm(static_cast<std::size_t>(n_profile));
    std::vector<double> off(static_cast<std::size_t>(n_profile));
    const double c = g.c();
    for (int i = 0; i < n_profile; ++i) {
        const std::size_t li = static_cast<std::size_t>(
            static_cast<long long>(i) * total / n_profile);
        const double s = loop[li][0];
        const double y = loop[li][1];
        const double rp = c * g.f_s(s);  // dr/ds
        const double zp = std::sqrt(std::max(0.0, 1.0 - rp * rp));
        rz[static_cast<std::size_t>(i)] = {r_of_s.eval(s), x3_of_s.eval(s)};
        nrm[static_cast<std::size_t>(i)] = {zp, -rp};  // outward unit normal of Y in the (r, x3) plane
        off[static_cast<std::size_t>(i)] = y;
    }
    TriangleMesh mesh = revolve(rz, nrm, off, n_theta, true);
    if (mesh.signed_volume() < 0.0)
        for (auto& t : mesh.triangles) std::swap(t[1], t[2]);
    return mesh;
}

void write_obj(const TriangleMesh& mesh, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw IoError("cannot open for writing: " + path);
    for (const auto& v : mesh.vertices)
        std::fprintf(fp, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    for (const auto& t : mesh.triangles)
        std::fprintf(fp, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    if (std::fclose(fp) != 0) throw IoError("write failed: " + path);
}

TriangleMesh read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open OBJ: " + path);
    TriangleMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() < 2) continue;
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "v") {
            std::array<double, 3> v{};
            row >> v[0] >> v[1] >> v[2];
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::array<int, 3> t{};
            row >> t[0] >> t[1] >> t[2];
            for (auto& idx : t) --idx;
            mesh.triangles.push_back(t);
        }
    }
    return mesh;
}

void write_profile_svg(const BubbleProfile& bp, const std::string& path) {
    const auto loop = closed_profile_loop(bp);
    double smin = 1e300, smax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : loop) {
        smin = std::min(smin, p[0]);
        smax = std::max(smax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    const double w = 800.0, h = 600.0, margin = 60.0;
    const double scale = std::min((w - 2 * margin) / std::max(smax - smin, 1e-12),
                                  (h - 2 * margin) / std::max(ymax - ymin, 1e-12));
    auto X = [&](double s) { return margin + (s - smin) * scale; };
    auto Y = [&](double y) { return h - margin - (y - ymin) * scale; };

    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw IoError("cannot open for writing: " + path);
    std::fprintf(fp,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
                 "width=\"800\" height=\"600\">\n");
    std::fprintf(fp, "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n");
    // axes through (0, 0)
    std::fprintf(fp,
                 "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#bbbbbb\"/>\n",
                 X(smin), Y(0.0), X(smax), Y(0.0));
    std::fprintf(fp,
                 "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"#bbbbbb\"/>\n",
                 X(0.0), Y(ymin), X(0.0), Y(ymax));
    std::fprintf(fp, "<path d=\"M");
    for (std::size_t i = 0; i < loop.size(); ++i)
        std::fprintf(fp, "%s%.6f %.6f", i ? " L" : "", X(loop[i][0]), Y(loop[i][1]));
    std::fprintf(fp, " Z\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n");
    std::fprintf(fp,
                 "<text x=\"%.3f\" y=\"%.3f\" font-family=\"monospace\" font-size=\"14\">"
                 "s1=%.6g H=%.6g</text>\n",
                 margin, margin * 0.6, bp.s1, bp.H);
    std::fprintf(fp, "</svg>\n");
    if (std::fclose(fp) != 0) throw IoError("write failed: " + path);
}

}  // namespace bubblelab
