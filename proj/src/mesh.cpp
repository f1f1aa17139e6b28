#include "weldcrack/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace weldcrack {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey mm(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// ----------------------------------------------------------------------------
// Conforming newest-vertex bisection on top of a diagonal-split tensor grid
// ----------------------------------------------------------------------------

struct Builder {
    std::vector<Vec2> xy;
    std::vector<std::array<int, 3>> tri;  // refinement edge is (t[0], t[1]), CCW
    std::map<EdgeKey, std::array<int, 2>> edge2tri;

    void attach(const EdgeKey& e, int t) {
        auto& adj = edge2tri.try_emplace(e, std::array<int, 2>{-1, -1}).first->second;
        if (adj[0] == -1)
            adj[0] = t;
        else if (adj[1] == -1)
            adj[1] = t;
        else
            throw std::logic_error("mesh builder: three triangles share an edge");
    }

    void detach(const EdgeKey& e, int t) {
        auto it = edge2tri.find(e);
        if (it == edge2tri.end()) throw std::logic_error("mesh builder: detaching unknown edge");
        auto& adj = it->second;
        if (adj[0] == t)
            adj[0] = -1;
        else if (adj[1] == t)
            adj[1] = -1;
        else
            throw std::logic_error("mesh builder: detaching a triangle not on the edge");
        if (adj[0] == -1 && adj[1] == -1) edge2tri.erase(it);
    }

    int neighbor(const EdgeKey& e, int t) const {
        auto it = edge2tri.find(e);
        if (it == edge2tri.end()) return -1;
        return it->second[0] == t ? it->second[1] : it->second[0];
    }

    int add_tri(int a, int b, int c) {
        const int id = static_cast<int>(tri.size());
        tri.push_back({a, b, c});
        attach(mm(a, b), id);
        attach(mm(b, c), id);
        attach(mm(c, a), id);
        return id;
    }

    // Replace t = (A,B,C) by its two bisection children through midpoint m of
    // the refinement edge AB: (C,A,m) with edge CA and (B,C,m) with edge BC.
    void split_one(int t, int m) {
        const int a = tri[t][0], b = tri[t][1], c = tri[t][2];
        detach(mm(a, b), t);
        detach(mm(b, c), t);
        detach(mm(c, a), t);
        tri[t] = {c, a, m};
        attach(mm(c, a), t);
        attach(mm(a, m), t);
        attach(mm(m, c), t);
        const int t2 = static_cast<int>(tri.size());
        tri.push_back({b, c, m});
        attach(mm(b, c), t2);
        attach(mm(c, m), t2);
        attach(mm(m, b), t2);
    }

    // Bisect t through its refinement edge, first forcing the neighbor across
    // that edge into a compatible state so the triangulation stays conforming.
    void bisect(int t) {
        const int a = tri[t][0], b = tri[t][1];
        const EdgeKey e = mm(a, b);
        int n = neighbor(e, t);
        if (n != -1 && mm(tri[n][0], tri[n][1]) != e) {
            bisect(n);
            n = neighbor(e, t);
            if (n != -1 && mm(tri[n][0], tri[n][1]) != e)
                throw std::logic_error("mesh builder: bisection closure failed");
        }
        const int m = static_cast<int>(xy.size());
        xy.push_back(Vec2{0.5 * (xy[a].x + xy[b].x), 0.5 * (xy[a].y + xy[b].y)});
        split_one(t, m);
        if (n != -1) split_one(n, m);
    }
};

std::vector<double> dedupe_sorted(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

// Cut [knots] into near-uniform steps of length about h, keeping every knot.
std::vector<double> subdivide(const std::vector<double>& knots, double h) {
    std::vector<double> out;
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], len = knots[i + 1] - knots[i];
        const long n = std::max(1L, std::lround(len / h));
        for (long k = 0; k < n; ++k)
            out.push_back(lo + len * static_cast<double>(k) / static_cast<double>(n));
    }
    out.push_back(knots.back());
    return out;
}

double dist2(Vec2 p, Vec2 q) {
    const double dx = p.x - q.x, dy = p.y - q.y;
    return dx * dx + dy * dy;
}

}  // namespace

Mesh build_mesh(const PlateGeometry& geom, const CrackConfig& cracks, const BoundaryLoad& load,
                const MeshOptions& opt) {
    if (!(opt.h > 0.0)) throw std::invalid_argument("mesh: target edge length must be positive");
    if (opt.tip_grading < 0 || opt.tip_grading > 10)
        throw std::invalid_argument("mesh: tip grading levels must lie in [0, 10]");

    // The base grid must resolve every crack and gap segment by a clear
    // margin, otherwise tangency geometry is aliased.
    if (!cracks.tips.empty()) {
        double min_seg = geom.a;
        for (size_t i = 0; i + 1 < cracks.tips.size(); ++i)
            min_seg = std::min(min_seg, cracks.tips[i + 1] - cracks.tips[i]);
        if (!(opt.h < 0.25 * min_seg))
            throw std::invalid_argument(
                "mesh: target edge length must stay below a quarter of the shortest "
                "crack or gap segment");
    }

    // ---- knot lines -------------------------------------------------------
    std::vector<double> xknots = {0.0, geom.a};
    xknots.insert(xknots.end(), cracks.tips.begin(), cracks.tips.end());
    std::vector<double> yknots = {0.0, geom.c, geom.b};
    for (const auto& p : load.patches) {
        if (p.side == Side::bottom || p.side == Side::top) {
            xknots.push_back(p.lo);
            xknots.push_back(p.hi);
        } else {
            yknots.push_back(p.lo);
            yknots.push_back(p.hi);
        }
    }
    const double merge_tol = 1e-12 * std::max(geom.a, geom.b);
    const std::vector<double> xs = subdivide(dedupe_sorted(std::move(xknots), merge_tol), opt.h);
    const std::vector<double> ys = subdivide(dedupe_sorted(std::move(yknots), merge_tol), opt.h);

    // ---- base triangulation ------------------------------------------------
    Builder bld;
    const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
    bld.xy.reserve(static_cast<size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) bld.xy.push_back(Vec2{xs[ix], ys[iy]});
    const auto vid = [nx](int ix, int iy) { return iy * nx + ix; };
    for (int iy = 0; iy + 1 < ny; ++iy) {
        for (int ix = 0; ix + 1 < nx; ++ix) {
            const int sw = vid(ix, iy), se = vid(ix + 1, iy);
            const int nw = vid(ix, iy + 1), ne = vid(ix + 1, iy + 1);
            bld.add_tri(ne, sw, se);  // diagonal sw-ne is the refinement edge
            bld.add_tri(sw, ne, nw);
        }
    }

    // ---- grading toward the interior tips ----------------------------------
    std::vector<Vec2> tip_pts;
    for (size_t j = 0; j < cracks.tips.size(); ++j)
        if (cracks.is_interior_tip(static_cast<int>(j)))
            tip_pts.push_back(Vec2{cracks.tips[j], geom.c});

    for (int level = 1; level <= opt.tip_grading && !tip_pts.empty(); ++level) {
        const double rho = 4.0 * opt.h * std::pow(2.0, 1 - level);
        const double rho2 = rho * rho;
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<std::pair<int, std::array<int, 3>>> marked;
            for (int t = 0; t < static_cast<int>(bld.tri.size()); ++t) {
                bool near = false;
                for (int i = 0; i < 3 && !near; ++i)
                    for (const auto& tp : tip_pts)
                        if (dist2(bld.xy[bld.tri[t][i]], tp) <= rho2) {
                            near = true;
                            break;
                        }
                if (near) marked.emplace_back(t, bld.tri[t]);
            }
            for (const auto& [id, snap] : marked)
                if (bld.tri[id] == snap) bld.bisect(id);
        }
    }

    // ---- open the cracks ----------------------------------------------------
    Mesh mesh;
    mesh.geom = geom;
    mesh.cracks = cracks;
    mesh.opt = opt;

    const double ctol = classify_tol(geom);
    const double ytol = 1e-12 * geom.b;
    std::map<int, int> dup;
    if (!cracks.tips.empty()) {
        const int nv0 = static_cast<int>(bld.xy.size());
        for (int v = 0; v < nv0; ++v) {
            if (std::abs(bld.xy[v].y - geom.c) > ytol) continue;
            const double x = bld.xy[v].x;
            bool open = x <= ctol || x >= geom.a - ctol;  // lateral surface breaks
            for (int k = 0; !open && k < cracks.crack_count(); ++k)
                open = x > cracks.tips[2 * k] + ctol && x < cracks.tips[2 * k + 1] - ctol;
            if (open) {
                dup[v] = static_cast<int>(bld.xy.size());
                bld.xy.push_back(bld.xy[v]);
            }
        }
        for (auto& t : bld.tri) {
            const double cy = (bld.xy[t[0]].y + bld.xy[t[1]].y + bld.xy[t[2]].y) / 3.0;
            if (cy < geom.c)
                for (int i = 0; i < 3; ++i) {
                    const auto it = dup.find(t[i]);
                    if (it != dup.end()) t[i] = it->second;
                }
        }
    }
    mesh.n_duplicated = static_cast<int>(dup.size());
    mesh.n_vertices = static_cast<int>(bld.xy.size());
    mesh.node_xy = bld.xy;

    // ---- quadratic midside nodes -------------------------------------------
    std::map<EdgeKey, int> midnode;
    mesh.elems.reserve(bld.tri.size());
    for (const auto& t : bld.tri) {
        P2Element el;
        el.n[0] = t[0];
        el.n[1] = t[1];
        el.n[2] = t[2];
        for (int i = 0; i < 3; ++i) {
            const int a = t[i], b = t[(i + 1) % 3];
            const auto [it, inserted] = midnode.try_emplace(mm(a, b), mesh.n_nodes());
            if (inserted)
                mesh.node_xy.push_back(Vec2{0.5 * (bld.xy[a].x + bld.xy[b].x),
                                            0.5 * (bld.xy[a].y + bld.xy[b].y)});
            el.n[3 + i] = it->second;
        }
        mesh.elems.push_back(el);
    }

    // ---- boundary edges and crack faces -------------------------------------
    std::map<EdgeKey, std::pair<int, int>> edge_count;  // edge -> (count, owner tri)
    for (int t = 0; t < static_cast<int>(bld.tri.size()); ++t)
        for (int i = 0; i < 3; ++i) {
            auto& e = edge_count.try_emplace(mm(bld.tri[t][i], bld.tri[t][(i + 1) % 3]),
                                             std::pair<int, int>{0, t})
                          .first->second;
            e.first += 1;
            e.second = t;
        }

    const double stol = 1e-12 * std::max(geom.a, geom.b);
    std::vector<CrackFaceEdge> upper, lower;
    for (const auto& [key, cnt] : edge_count) {
        if (cnt.first != 1) continue;
        const int va = key.first, vb = key.second;
        const Vec2 pa = mesh.node_xy[va], pb = mesh.node_xy[vb];
        const int mn = midnode.at(key);

        const auto make_ref = [&](Side side, double ca, double cb) {
            BoundaryEdgeRef r;
            r.side = side;
            if (ca < cb) {
                r.lo = ca;
                r.hi = cb;
                r.nodes = {va, mn, vb};
            } else {
                r.lo = cb;
                r.hi = ca;
                r.nodes = {vb, mn, va};
            }
            mesh.boundary.push_back(r);
        };

        if (pa.y <= stol && pb.y <= stol)
            make_ref(Side::bottom, pa.x, pb.x);
        else if (std::abs(pa.y - geom.b) <= stol && std::abs(pb.y - geom.b) <= stol)
            make_ref(Side::top, pa.x, pb.x);
        else if (pa.x <= stol && pb.x <= stol)
            make_ref(Side::left, pa.y, pb.y);
        else if (std::abs(pa.x - geom.a) <= stol && std::abs(pb.x - geom.a) <= stol)
            make_ref(Side::right, pa.y, pb.y);
        else {
            if (std::abs(pa.y - geom.c) > ytol || std::abs(pb.y - geom.c) > ytol)
                throw std::logic_error("mesh: unattached edge neither on the boundary nor a crack face");
            CrackFaceEdge f;
            f.x_lo = std::min(pa.x, pb.x);
            f.x_hi = std::max(pa.x, pb.x);
            const std::array<int, 3> nodes =
                pa.x < pb.x ? std::array<int, 3>{va, mn, vb} : std::array<int, 3>{vb, mn, va};
            const auto& t = bld.tri[cnt.second];
            const double cy = (bld.xy[t[0]].y + bld.xy[t[1]].y + bld.xy[t[2]].y) / 3.0;
            if (cy > geom.c) {
                f.upper = nodes;
                upper.push_back(f);
            } else {
                f.lower = nodes;
                lower.push_back(f);
            }
        }
    }

    const auto by_xlo = [](const CrackFaceEdge& l, const CrackFaceEdge& r) {
        return l.x_lo < r.x_lo;
    };
    std::sort(upper.begin(), upper.end(), by_xlo);
    std::sort(lower.begin(), lower.end(), by_xlo);
    if (upper.size() != lower.size())
        throw std::logic_error("mesh: crack faces do not pair up");
    for (size_t i = 0; i < upper.size(); ++i) {
        if (std::abs(upper[i].x_lo - lower[i].x_lo) > stol ||
            std::abs(upper[i].x_hi - lower[i].x_hi) > stol)
            throw std::logic_error("mesh: crack face intervals disagree between the two sides");
        CrackFaceEdge f = upper[i];
        f.lower = lower[i].lower;
        mesh.faces.push_back(f);
    }

    std::sort(mesh.boundary.begin(), mesh.boundary.end(),
              [](const BoundaryEdgeRef& l, const BoundaryEdgeRef& r) {
                  return std::make_pair(static_cast<int>(l.side), l.lo) <
                         std::make_pair(static_cast<int>(r.side), r.lo);
              });

    // ---- quality numbers -----------------------------------------------------
    double min_cos = -1.0;  // largest cosine = smallest angle
    double min_edge2 = std::numeric_limits<double>::infinity();
    for (const auto& t : bld.tri) {
        for (int i = 0; i < 3; ++i) {
            const Vec2 p = bld.xy[t[i]], q = bld.xy[t[(i + 1) % 3]], r = bld.xy[t[(i + 2) % 3]];
            const double ux = q.x - p.x, uy = q.y - p.y;
            const double vx = r.x - p.x, vy = r.y - p.y;
            const double lu = std::hypot(ux, uy), lv = std::hypot(vx, vy);
            min_cos = std::max(min_cos, (ux * vx + uy * vy) / (lu * lv));
            min_edge2 = std::min(min_edge2, lu * lu);
        }
    }
    mesh.min_angle_deg = std::acos(std::min(1.0, min_cos)) * 180.0 / 3.14159265358979323846;
    mesh.min_edge_len = std::sqrt(min_edge2);

    return mesh;
}

}  // namespace weldcrack
