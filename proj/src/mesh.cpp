#include "helixlab/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace helixlab {

using json = nlohmann::json;

// ---- basic structure --------------------------------------------------------

std::vector<EdgeInfo> build_edges(const SymMesh& m) {
    std::map<std::pair<int, int>, EdgeInfo> emap;
    for (int t = 0; t < m.nf(); ++t) {
        const auto& tr = m.tris[t];
        for (int k = 0; k < 3; ++k) {
            int a = tr[k], b = tr[(k + 1) % 3];
            auto key = std::minmax(a, b);
            auto it = emap.find(key);
            if (it == emap.end()) {
                emap[key] = {key.first, key.second, t, -1};
            } else {
                if (it->second.t1 >= 0)
                    throw std::runtime_error("build_edges: edge with more than two triangles");
                it->second.t1 = t;
            }
        }
    }
    std::vector<EdgeInfo> edges;
    edges.reserve(emap.size());
    for (auto& kv : emap) edges.push_back(kv.second);
    return edges;
}

Chart tri_anchor_chart(const SymMesh& m, int t) {
    const auto& tr = m.tris[t];
    bool allO = true, allS = true;
    for (int k = 0; k < 3; ++k) {
        if (m.verts[tr[k]].chart != Chart::NearO) allO = false;
        if (m.verts[tr[k]].chart != Chart::NearOstar) allS = false;
    }
    if (allO) return Chart::NearO;
    if (allS) return Chart::NearOstar;
    double worstO = 0, worstS = 0;
    for (int k = 0; k < 3; ++k) {
        worstO = std::max(worstO, in_chart(m.verts[tr[k]], Chart::NearO, m.amb).r2());
        worstS = std::max(worstS, in_chart(m.verts[tr[k]], Chart::NearOstar, m.amb).r2());
    }
    return worstO <= worstS ? Chart::NearO : Chart::NearOstar;
}

std::array<ChartPoint, 3> tri_points(const SymMesh& m, int t, Chart chart) {
    const auto& tr = m.tris[t];
    return {in_chart(m.verts[tr[0]], chart, m.amb), in_chart(m.verts[tr[1]], chart, m.amb),
            in_chart(m.verts[tr[2]], chart, m.amb)};
}

double edge_metric_length(const SymMesh& m, int a, int b) {
    return geodesic_distance(m.verts[a], m.verts[b], m.amb);
}

double tri_min_angle(const SymMesh& m, int t) {
    Chart c = tri_anchor_chart(m, t);
    auto p = tri_points(m, t, c);
    ChartPoint cen{(p[0].x + p[1].x + p[2].x) / 3, (p[0].y + p[1].y + p[2].y) / 3,
                   (p[0].z + p[1].z + p[2].z) / 3, c};
    const double rho = conformal_factor(cen, m.amb);
    auto vec = [&](int i, int j) {
        return Vec3{rho * (p[j].x - p[i].x), rho * (p[j].y - p[i].y), p[j].z - p[i].z};
    };
    auto ang = [](const Vec3& u, const Vec3& v) {
        const double uu = u.x * u.x + u.y * u.y + u.z * u.z;
        const double vv = v.x * v.x + v.y * v.y + v.z * v.z;
        const double uv = u.x * v.x + u.y * v.y + u.z * v.z;
        if (uu == 0 || vv == 0) return 0.0;
        return std::acos(std::clamp(uv / std::sqrt(uu * vv), -1.0, 1.0));
    };
    const double a0 = ang(vec(0, 1), vec(0, 2));
    const double a1 = ang(vec(1, 2), vec(1, 0));
    const double a2 = M_PI - a0 - a1;
    return std::min({a0, a1, a2});
}

void apply_pins(SymMesh& m) {
    if (!m.curve) return;
    for (int v = 0; v < m.nv(); ++v)
        if (m.pins[v].pinned()) m.verts[v] = m.curve->eval(m.pins[v].piece, m.pins[v].param);
}

void symmetrize(SymMesh& m) {
    for (int v = 0; v < m.nv(); ++v) {
        const int w = m.pairing[v];
        if (w == v) {
            m.verts[v].x = 0.0;
            m.verts[v].z = 0.0;
            continue;
        }
        if (w < v) continue;  // handled as the partner of w
        ChartPoint q = apply_isometry(Isometry::rho_Y(), m.verts[w], m.amb);
        if (q.chart != m.verts[v].chart && q.r2() > 0.0) q = swap_chart(q, m.amb);
        if (q.chart == m.verts[v].chart) {
            ChartPoint mid{0.5 * (m.verts[v].x + q.x), 0.5 * (m.verts[v].y + q.y),
                           0.5 * (m.verts[v].z + q.z), q.chart};
            m.verts[v] = mid;
            ChartPoint back = apply_isometry(Isometry::rho_Y(), mid, m.amb);
            m.verts[w] = in_chart(back, m.verts[w].chart, m.amb);
        }
    }
}

double symmetry_defect(const SymMesh& m) {
    double worst = 0.0;
    for (int v = 0; v < m.nv(); ++v) {
        ChartPoint q = apply_isometry(Isometry::rho_Y(), m.verts[m.pairing[v]], m.amb);
        worst = std::max(worst, geodesic_distance(m.verts[v], q, m.amb));
    }
    return worst;
}

void validate_mesh(const SymMesh& m, double tol) {
    if (m.pins.size() != m.verts.size() || m.pairing.size() != m.verts.size() ||
        m.fixed_on_Y.size() != m.verts.size())
        throw std::runtime_error("validate_mesh: attribute arrays out of sync");
    std::set<std::pair<int, int>> directed;
    for (const auto& tr : m.tris) {
        if (tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2])
            throw std::runtime_error("validate_mesh: degenerate triangle");
        for (int k = 0; k < 3; ++k) {
            auto de = std::make_pair(tr[k], tr[(k + 1) % 3]);
            if (!directed.insert(de).second)
                throw std::runtime_error("validate_mesh: inconsistent orientation");
        }
    }
    build_edges(m);  // throws on >2 incidence
    // pairing is an involution and maps the triangle set to itself
    std::set<std::array<int, 3>> canon;
    auto canon_tri = [](std::array<int, 3> t) {
        std::sort(t.begin(), t.end());
        return t;
    };
    for (const auto& tr : m.tris) canon.insert(canon_tri(tr));
    for (int v = 0; v < m.nv(); ++v) {
        if (m.pairing[m.pairing[v]] != v)
            throw std::runtime_error("validate_mesh: pairing is not an involution");
        if (m.fixed_on_Y[v] && m.pairing[v] != v)
            throw std::runtime_error("validate_mesh: fixed vertex with a distinct partner");
    }
    for (const auto& tr : m.tris) {
        std::array<int, 3> img{m.pairing[tr[0]], m.pairing[tr[1]], m.pairing[tr[2]]};
        if (!canon.count(canon_tri(img)))
            throw std::runtime_error("validate_mesh: pairing does not map triangles to triangles");
    }
    const double scale = m.amb.R * tol;
    for (int v = 0; v < m.nv(); ++v) {
        if (m.fixed_on_Y[v]) {
            if (std::abs(m.verts[v].x) > scale || std::abs(m.verts[v].z) > scale)
                throw std::runtime_error("validate_mesh: fixed vertex off Y");
        }
        if (m.pins[v].pinned() && m.curve) {
            ChartPoint q = m.curve->eval(m.pins[v].piece, m.pins[v].param);
            if (geodesic_distance(q, m.verts[v], m.amb) > scale)
                throw std::runtime_error("validate_mesh: pinned vertex off its curve");
        }
    }
}

// ---- topology ---------------------------------------------------------------

namespace {
struct UF {
    std::vector<int> p;
    explicit UF(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) {
        while (p[a] != a) a = p[a] = p[p[a]];
        return a;
    }
    void unite(int a, int b) { p[find(a)] = find(b); }
};
}  // namespace

TopologyCache topology_summary(const SymMesh& m) {
    TopologyCache tc;
    tc.V = m.nv();
    tc.F = m.nf();
    auto edges = build_edges(m);
    tc.E = static_cast<int>(edges.size());
    tc.chi = tc.V - tc.E + tc.F;

    UF uf(tc.V);
    for (const auto& e : edges) uf.unite(e.a, e.b);
    std::map<int, int> comp_id;
    for (int v = 0; v < tc.V; ++v) comp_id.emplace(uf.find(v), static_cast<int>(comp_id.size()));
    tc.components = static_cast<int>(comp_id.size());

    // boundary loops: walk boundary edges (every boundary vertex has exactly two)
    std::map<int, std::vector<int>> incident;  // vertex -> boundary edge ids
    std::vector<const EdgeInfo*> bedges;
    for (const auto& e : edges)
        if (e.boundary()) {
            incident[e.a].push_back(static_cast<int>(bedges.size()));
            incident[e.b].push_back(static_cast<int>(bedges.size()));
            bedges.push_back(&e);
        }
    for (auto& kv : incident)
        if (kv.second.size() != 2)
            throw std::runtime_error("topology_summary: boundary vertex without two boundary edges");
    std::vector<bool> used(bedges.size(), false);
    int loops = 0;
    for (size_t i = 0; i < bedges.size(); ++i) {
        if (used[i]) continue;
        ++loops;
        size_t cur = i;
        int enter = bedges[i]->a;
        while (!used[cur]) {
            used[cur] = true;
            int exit = (bedges[cur]->a == enter) ? bedges[cur]->b : bedges[cur]->a;
            const auto& inc = incident[exit];
            size_t next = (inc[0] == static_cast<int>(cur)) ? inc[1] : inc[0];
            enter = exit;
            cur = next;
        }
    }
    tc.boundary_loops = loops;

    // genus per connected component via chi = 2 - 2g - b
    std::map<int, std::array<int, 4>> per;  // root -> V,E,F,loops
    for (int v = 0; v < tc.V; ++v) per[uf.find(v)][0]++;
    for (const auto& e : edges) per[uf.find(e.a)][1]++;
    for (const auto& tr : m.tris) per[uf.find(tr[0])][2]++;
    // attribute each boundary loop to its component
    std::vector<bool> used2(bedges.size(), false);
    for (size_t i = 0; i < bedges.size(); ++i) {
        if (used2[i]) continue;
        per[uf.find(bedges[i]->a)][3]++;
        size_t cur = i;
        int enter = bedges[i]->a;
        while (!used2[cur]) {
            used2[cur] = true;
            int exit = (bedges[cur]->a == enter) ? bedges[cur]->b : bedges[cur]->a;
            const auto& inc = incident[exit];
            size_t next = (inc[0] == static_cast<int>(cur)) ? inc[1] : inc[0];
            enter = exit;
            cur = next;
        }
    }
    int genus = 0;
    for (auto& kv : per) {
        const auto& a = kv.second;
        const int chi_c = a[0] - a[1] + a[2];
        const int g2 = 2 - chi_c - a[3];
        if (g2 < 0 || g2 % 2)
            throw std::runtime_error("topology_summary: inconsistent component genus");
        genus += g2 / 2;
    }
    tc.genus = genus;
    return tc;
}

// ---- refinement -------------------------------------------------------------

namespace {

Chart edge_anchor(const SymMesh& m, int a, int b) {
    if (m.verts[a].chart == m.verts[b].chart) return m.verts[a].chart;
    const double ra = m.verts[a].r2(), rb = m.verts[b].r2();
    return ra >= rb ? m.verts[a].chart : m.verts[b].chart;
}

ChartPoint edge_midpoint(const SymMesh& m, int a, int b) {
    Chart c = edge_anchor(m, a, b);
    ChartPoint pa = in_chart(m.verts[a], c, m.amb);
    ChartPoint pb = in_chart(m.verts[b], c, m.amb);
    ChartPoint mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y), 0.5 * (pa.z + pb.z), c};
    return normalize_chart(mid, m.amb);
}

VertexPin pin_for_midpoint(const SymMesh& m, int a, int b) {
    const VertexPin& pa = m.pins[a];
    const VertexPin& pb = m.pins[b];
    if (!pa.pinned() || !pb.pinned() || !m.curve) return {};
    if (pa.piece == pb.piece) return {pa.piece, 0.5 * (pa.param + pb.param)};
    // corner-adjacent: one endpoint sits at an end of the other's piece
    auto try_side = [&](const VertexPin& corner, const VertexPin& inner) -> VertexPin {
        ChartPoint pc = m.curve->eval(corner.piece, corner.param);
        ChartPoint e0 = m.curve->eval(inner.piece, 0.0);
        ChartPoint e1 = m.curve->eval(inner.piece, 1.0);
        const double tol = 1e-7 * m.amb.R;
        if (geodesic_distance(pc, e0, m.amb) < tol)
            return {inner.piece, 0.5 * inner.param};
        if (geodesic_distance(pc, e1, m.amb) < tol)
            return {inner.piece, 0.5 * (1.0 + inner.param)};
        return {};
    };
    VertexPin r = try_side(pa, pb);
    if (r.pinned()) return r;
    r = try_side(pb, pa);
    return r;  // possibly free
}

}  // namespace

void refine_uniform(SymMesh& m) {
    auto edges = build_edges(m);
    std::map<std::pair<int, int>, int> midv;
    for (const auto& e : edges) {
        const int nv = m.nv();
        midv[{e.a, e.b}] = nv;
        m.verts.push_back(edge_midpoint(m, e.a, e.b));
        m.pins.push_back(pin_for_midpoint(m, e.a, e.b));
        m.pairing.push_back(-1);
        m.fixed_on_Y.push_back(0);
    }
    for (const auto& e : edges) {
        const int v = midv[{e.a, e.b}];
        auto key = std::minmax(m.pairing[e.a], m.pairing[e.b]);
        const int w = midv.at({key.first, key.second});
        m.pairing[v] = w;
        if (w == v) {
            m.fixed_on_Y[v] = 1;
            m.verts[v].x = 0.0;
            m.verts[v].z = 0.0;
        }
    }
    std::vector<std::array<int, 3>> out;
    out.reserve(4 * m.tris.size());
    for (const auto& tr : m.tris) {
        const int a = tr[0], b = tr[1], c = tr[2];
        const int ab = midv.at(std::minmax(a, b));
        const int bc = midv.at(std::minmax(b, c));
        const int ca = midv.at(std::minmax(c, a));
        out.push_back({a, ab, ca});
        out.push_back({b, bc, ab});
        out.push_back({c, ca, bc});
        out.push_back({ab, bc, ca});
    }
    m.tris = std::move(out);
    apply_pins(m);
}

namespace {

// dynamic edge->triangles connectivity for local remeshing
struct Conn {
    std::map<std::pair<int, int>, std::pair<int, int>> e2t;
    static std::pair<int, int> key(int a, int b) { return std::minmax(a, b); }
    void add_tri(const SymMesh& m, int t) {
        const auto& tr = m.tris[t];
        for (int k = 0; k < 3; ++k) {
            auto kk = key(tr[k], tr[(k + 1) % 3]);
            auto it = e2t.find(kk);
            if (it == e2t.end())
                e2t[kk] = {t, -1};
            else if (it->second.first < 0)
                it->second.first = t;
            else
                it->second.second = t;
        }
    }
    void remove_tri(const SymMesh& m, int t) {
        const auto& tr = m.tris[t];
        for (int k = 0; k < 3; ++k) {
            auto kk = key(tr[k], tr[(k + 1) % 3]);
            auto it = e2t.find(kk);
            if (it == e2t.end()) continue;
            if (it->second.first == t) {
                it->second.first = it->second.second;
                it->second.second = -1;
            } else if (it->second.second == t) {
                it->second.second = -1;
            }
            if (it->second.first < 0) e2t.erase(it);
        }
    }
    void rebuild(const SymMesh& m) {
        e2t.clear();
        for (int t = 0; t < m.nf(); ++t) add_tri(m, t);
    }
};

int third_vertex(const std::array<int, 3>& tr, int a, int b) {
    for (int k = 0; k < 3; ++k)
        if (tr[k] != a && tr[k] != b) return tr[k];
    return -1;
}

double min_angle_of_tri_candidate(const SymMesh& m, std::array<int, 3> tr) {
    SymMesh probe;  // cheap view: reuse tri_min_angle via a temp 1-triangle mesh
    probe.amb = m.amb;
    probe.verts = {m.verts[tr[0]], m.verts[tr[1]], m.verts[tr[2]]};
    probe.tris = {{0, 1, 2}};
    return tri_min_angle(probe, 0);
}

bool do_flip(SymMesh& m, Conn& conn, int a, int b) {
    auto it = conn.e2t.find(Conn::key(a, b));
    if (it == conn.e2t.end() || it->second.second < 0) return false;  // boundary
    int t0 = it->second.first, t1 = it->second.second;
    const int c = third_vertex(m.tris[t0], a, b);
    const int d = third_vertex(m.tris[t1], a, b);
    if (c < 0 || d < 0 || c == d) return false;
    if (conn.e2t.count(Conn::key(c, d))) return false;
    // orient: make t0 = (a,b,c) order
    std::array<int, 3> T0 = m.tris[t0], T1 = m.tris[t1];
    bool t0_has_ab = false;
    for (int k = 0; k < 3; ++k)
        if (T0[k] == a && T0[(k + 1) % 3] == b) t0_has_ab = true;
    if (!t0_has_ab) {
        std::swap(t0, t1);
        std::swap(T0, T1);
    }
    const double before = std::min(tri_min_angle(m, t0), tri_min_angle(m, t1));
    std::array<int, 3> N0{a, d, c}, N1{d, b, c};
    const double after =
        std::min(min_angle_of_tri_candidate(m, N0), min_angle_of_tri_candidate(m, N1));
    if (after <= before + 1e-6) return false;
    conn.remove_tri(m, t0);
    conn.remove_tri(m, t1);
    m.tris[t0] = N0;
    m.tris[t1] = N1;
    conn.add_tri(m, t0);
    conn.add_tri(m, t1);
    return true;
}

}  // namespace

void refine_quality(SymMesh& m, const QualityConfig& cfg) {
    Conn conn;
    conn.rebuild(m);

    for (int pass = 0; pass < cfg.flip_passes; ++pass) {
        auto edges = build_edges(m);
        int flips = 0;
        for (const auto& e : edges) {
            if (tri_min_angle(m, e.t0) >= cfg.min_angle_floor &&
                (e.t1 < 0 || tri_min_angle(m, e.t1) >= cfg.min_angle_floor))
                continue;
            const int pa = m.pairing[e.a], pb = m.pairing[e.b];
            const bool self_mirror = (Conn::key(pa, pb) == Conn::key(e.a, e.b));
            if (self_mirror) continue;
            if (do_flip(m, conn, e.a, e.b)) {
                do_flip(m, conn, pa, pb);
                ++flips;
            }
        }
        if (flips == 0) break;
    }

    if (cfg.split_above > 0.0) {
        auto edges = build_edges(m);
        std::set<std::pair<int, int>> done;
        for (const auto& e : edges) {
            auto kk = Conn::key(e.a, e.b);
            if (done.count(kk)) continue;
            if (edge_metric_length(m, e.a, e.b) <= cfg.split_above) continue;
            auto mk = Conn::key(m.pairing[e.a], m.pairing[e.b]);
            done.insert(kk);
            done.insert(mk);
            const int v1 = split_edge(m, e.a, e.b);
            if (mk != kk) {
                const int v2 = split_edge(m, mk.first, mk.second);
                if (v1 >= 0 && v2 >= 0) {
                    m.pairing[v1] = v2;
                    m.pairing[v2] = v1;
                    m.fixed_on_Y[v1] = m.fixed_on_Y[v2] = 0;
                }
            }
        }
    }

    if (cfg.collapse_below > 0.0) {
        for (int round = 0; round < 8; ++round) {
            auto edges = build_edges(m);
            bool any = false;
            for (const auto& e : edges) {
                if (e.a >= m.nv() || e.b >= m.nv()) continue;
                if (edge_metric_length(m, e.a, e.b) >= cfg.collapse_below) continue;
                if (collapse_edge(m, e.a, e.b)) {
                    any = true;
                    break;  // indices shifted; rescan
                }
            }
            if (!any) break;
        }
    }
    apply_pins(m);
}

int split_edge(SymMesh& m, int a, int b) {
    std::vector<int> adj;
    for (int t = 0; t < m.nf(); ++t) {
        const auto& tr = m.tris[t];
        bool ha = tr[0] == a || tr[1] == a || tr[2] == a;
        bool hb = tr[0] == b || tr[1] == b || tr[2] == b;
        if (ha && hb) adj.push_back(t);
    }
    if (adj.empty()) return -1;
    const int v = m.nv();
    m.verts.push_back(edge_midpoint(m, a, b));
    m.pins.push_back(pin_for_midpoint(m, a, b));
    const bool self = (std::minmax(m.pairing[a], m.pairing[b]) == std::minmax(a, b));
    m.pairing.push_back(v);  // self; caller links mirror midpoints otherwise
    m.fixed_on_Y.push_back(self ? 1 : 0);
    if (self) {
        m.verts[v].x = 0.0;
        m.verts[v].z = 0.0;
    }
    for (int t : adj) {
        std::array<int, 3> tr = m.tris[t];
        std::array<int, 3> t_new = tr;
        for (int k = 0; k < 3; ++k) {
            if ((tr[k] == a && tr[(k + 1) % 3] == b) || (tr[k] == b && tr[(k + 1) % 3] == a)) {
                m.tris[t][k] = v;
                t_new[(k + 1) % 3] = v;
            }
        }
        if (t_new != m.tris[t]) m.tris.push_back(t_new);
    }
    if (m.pins[v].pinned() && m.curve)
        m.verts[v] = m.curve->eval(m.pins[v].piece, m.pins[v].param);
    return v;
}

namespace {

bool collapse_ok(const SymMesh& m, int a, int b) {
    if (m.pins[a].pinned() || m.pins[b].pinned() || m.fixed_on_Y[a] || m.fixed_on_Y[b])
        return false;
    std::set<int> la, lb;
    int shared_tris = 0;
    for (const auto& tr : m.tris) {
        bool ha = tr[0] == a || tr[1] == a || tr[2] == a;
        bool hb = tr[0] == b || tr[1] == b || tr[2] == b;
        if (ha && hb) ++shared_tris;
        if (ha)
            for (int k : tr)
                if (k != a) la.insert(k);
        if (hb)
            for (int k : tr)
                if (k != b) lb.insert(k);
    }
    if (shared_tris != 2) return false;  // boundary or non-manifold edge
    std::vector<int> common;
    std::set_intersection(la.begin(), la.end(), lb.begin(), lb.end(), std::back_inserter(common));
    return common.size() == 2;  // link condition
}

}  // namespace

// Symmetric collapse: {a,b} together with its rho_Y mirror edge.
bool collapse_edge(SymMesh& m, int a, int b) {
    const int am = m.pairing[a], bm = m.pairing[b];
    const bool self = std::minmax(am, bm) == std::minmax(a, b);
    if (self) return false;
    // the two edges must involve four distinct vertices
    std::set<int> ids{a, b, am, bm};
    if (ids.size() != 4) return false;
    if (!collapse_ok(m, a, b) || !collapse_ok(m, am, bm)) return false;

    m.verts[a] = edge_midpoint(m, a, b);
    m.verts[am] = edge_midpoint(m, am, bm);
    m.pairing[a] = am;
    m.pairing[am] = a;

    std::vector<int> remap(m.nv());
    std::iota(remap.begin(), remap.end(), 0);
    remap[b] = a;
    remap[bm] = am;
    std::vector<std::array<int, 3>> tris;
    tris.reserve(m.tris.size());
    for (auto tr : m.tris) {
        for (int& k : tr) k = remap[k];
        if (tr[0] != tr[1] && tr[1] != tr[2] && tr[0] != tr[2]) tris.push_back(tr);
    }
    m.tris = std::move(tris);

    // compact out b and bm
    std::vector<int> newid(m.nv(), -1);
    int next = 0;
    for (int v = 0; v < m.nv(); ++v)
        if (v != b && v != bm) newid[v] = next++;
    SymMesh out;
    out.amb = m.amb;
    out.curve = m.curve;
    out.verts.reserve(next);
    for (int v = 0; v < m.nv(); ++v) {
        if (newid[v] < 0) continue;
        out.verts.push_back(m.verts[v]);
        out.pins.push_back(m.pins[v]);
        out.fixed_on_Y.push_back(m.fixed_on_Y[v]);
        out.pairing.push_back(newid[m.pairing[remap[v]]]);
    }
    for (auto tr : m.tris) {
        for (int& k : tr) k = newid[k];
        out.tris.push_back(tr);
    }
    m = std::move(out);
    return true;
}

// ---- Schwarz reflection -----------------------------------------------------

SymMesh schwarz_reflect(const SymMesh& s, double weld_tol_factor) {
    const double tol = weld_tol_factor * s.amb.R;
    const int n = s.nv();
    std::vector<std::uint8_t> on_axis(n, 0), on_x(n, 0);
    for (int v = 0; v < n; ++v) {
        const ChartPoint& p = s.verts[v];
        if (p.r2() <= tol * tol) on_axis[v] = 1;
        if (std::abs(p.z) <= tol && std::abs(p.y) <= tol && !on_axis[v]) on_x[v] = 1;
    }
    UF uf(2 * n);
    for (int v = 0; v < n; ++v) {
        if (on_axis[v]) uf.unite(n + v, v);
        if (on_x[v]) uf.unite(n + v, s.pairing[v]);
    }
    // corner points (on axis and on X simultaneously): also weld by the X rule
    for (int v = 0; v < n; ++v)
        if (on_axis[v] && std::abs(s.verts[v].z) <= tol) uf.unite(n + v, s.pairing[v]);

    std::vector<int> remap(2 * n, -1);
    SymMesh m;
    m.amb = s.amb;
    auto pos_of = [&](int i) -> ChartPoint {
        if (i < n) return s.verts[i];
        return apply_isometry(Isometry::rho_Z(), s.verts[i - n], s.amb);
    };
    for (int i = 0; i < 2 * n; ++i) {
        const int r = uf.find(i);
        if (remap[r] < 0) {
            remap[r] = m.nv();
            m.verts.push_back(pos_of(r));
            m.pins.push_back({});
            m.pairing.push_back(-1);
            m.fixed_on_Y.push_back(0);
        }
        if (geodesic_distance(pos_of(i), m.verts[remap[r]], m.amb) > 10 * tol)
            throw std::runtime_error("schwarz_reflect: weld mismatch exceeds tolerance");
        remap[i] = remap[r];
    }
    for (const auto& tr : s.tris) m.tris.push_back({remap[tr[0]], remap[tr[1]], remap[tr[2]]});
    for (const auto& tr : s.tris)
        m.tris.push_back({remap[n + tr[2]], remap[n + tr[1]], remap[n + tr[0]]});
    for (int v = 0; v < n; ++v) {
        m.pairing[remap[v]] = remap[s.pairing[v]];
        m.pairing[remap[n + v]] = remap[n + s.pairing[v]];
    }
    for (int v = 0; v < m.nv(); ++v)
        if (m.pairing[v] == v) m.fixed_on_Y[v] = 1;
    // drop duplicated triangles (welded slivers cannot occur; duplicates can at X)
    std::set<std::array<int, 3>> seen;
    std::vector<std::array<int, 3>> tris;
    for (const auto& tr : m.tris) {
        std::array<int, 3> c = tr;
        std::sort(c.begin(), c.end());
        if (seen.insert(c).second) tris.push_back(tr);
    }
    m.tris = std::move(tris);
    return m;
}

// ---- projection and distances -----------------------------------------------

namespace {
// closest point on triangle in scaled local coordinates (Ericson)
Vec3 closest_on_tri(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    auto sub = [](const Vec3& u, const Vec3& v) { return Vec3{u.x - v.x, u.y - v.y, u.z - v.z}; };
    auto dot = [](const Vec3& u, const Vec3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; };
    auto lerp = [](const Vec3& u, const Vec3& v, double t) {
        return Vec3{u.x + t * (v.x - u.x), u.y + t * (v.y - u.y), u.z + t * (v.z - u.z)};
    };
    Vec3 ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0 && d2 <= 0) return a;
    Vec3 bp = sub(p, b);
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0 && d4 <= d3) return b;
    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) return lerp(a, b, d1 / (d1 - d3));
    Vec3 cp = sub(p, c);
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0 && d5 <= d6) return c;
    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) return lerp(a, c, d2 / (d2 - d6));
    double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return lerp(b, c, t);
    }
    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return Vec3{a.x + ab.x * v + ac.x * w, a.y + ab.y * v + ac.y * w, a.z + ab.z * v + ac.z * w};
}
}  // namespace

MeshProjection nearest_point_on_mesh(const SymMesh& m, const ChartPoint& p) {
    MeshProjection best;
    best.dist = std::numeric_limits<double>::max();
    double second = std::numeric_limits<double>::max();
    ChartPoint second_pt;
    for (int t = 0; t < m.nf(); ++t) {
        Chart c = tri_anchor_chart(m, t);
        auto q = tri_points(m, t, c);
        ChartPoint pc = in_chart(p, c, m.amb);
        const double rho = conformal_factor(pc, m.amb);
        Vec3 P{rho * pc.x, rho * pc.y, pc.z};
        Vec3 A{rho * q[0].x, rho * q[0].y, q[0].z};
        Vec3 B{rho * q[1].x, rho * q[1].y, q[1].z};
        Vec3 C{rho * q[2].x, rho * q[2].y, q[2].z};
        Vec3 cp = closest_on_tri(P, A, B, C);
        const double d = std::sqrt((P.x - cp.x) * (P.x - cp.x) + (P.y - cp.y) * (P.y - cp.y) +
                                   (P.z - cp.z) * (P.z - cp.z));
        if (d < best.dist) {
            second = best.dist;
            second_pt = best.point;
            best.dist = d;
            best.tri = t;
            best.point = {cp.x / rho, cp.y / rho, cp.z, c};
        } else if (d < second) {
            second = d;
            second_pt = {cp.x / rho, cp.y / rho, cp.z, c};
        }
    }
    if (best.tri >= 0 && second < std::numeric_limits<double>::max()) {
        const double sep = geodesic_distance(best.point, second_pt, m.amb);
        if (second - best.dist < 1e-9 * m.amb.R && sep > 1e-3 * m.amb.R) best.ambiguous = true;
    }
    return best;
}

double mesh_hausdorff(const SymMesh& a, const SymMesh& b) {
    auto one_sided = [](const SymMesh& from, const SymMesh& to) {
        const int stride = std::max(1, from.nv() / 1500);
        double worst = 0.0;
        for (int v = 0; v < from.nv(); v += stride)
            worst = std::max(worst, nearest_point_on_mesh(to, from.verts[v]).dist);
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

SymMesh transform_mesh(const SymMesh& m, const Isometry& iso) {
    SymMesh out = m;
    for (auto& v : out.verts) v = apply_isometry(iso, v, m.amb);
    out.curve.reset();
    for (auto& p : out.pins) p = {};
    return out;
}

// ---- I/O ----------------------------------------------------------------------

static Vec3 view_position(const ChartPoint& p, const AmbientParams& amb) {
    Vec3 s = sphere_point(p, amb);
    const double f = 1.0 + p.z / amb.R;
    return {s.x * f, s.y * f, s.z * f};
}

void save_mesh(const SymMesh& m, const std::string& path_no_ext, const std::string& format,
               double kappa, bool embedded_view) {
    const std::string path = path_no_ext + "." + format;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_mesh: cannot open " + path);
    char buf[256];
    if (format == "obj") {
        for (const auto& v : m.verts) {
            if (embedded_view) {
                Vec3 w = view_position(v, m.amb);
                std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", w.x, w.y, w.z);
            } else {
                std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
            }
            os << buf;
        }
        for (const auto& t : m.tris) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    } else if (format == "ply") {
        os << "ply\nformat ascii 1.0\n";
        os << "element vertex " << m.nv() << "\n";
        os << "property double x\nproperty double y\nproperty double z\nproperty uchar chart\n";
        os << "element face " << m.nf() << "\nproperty list uchar int vertex_indices\nend_header\n";
        for (const auto& v : m.verts) {
            Vec3 w{v.x, v.y, v.z};
            if (embedded_view) w = view_position(v, m.amb);
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %d\n", w.x, w.y, w.z,
                          static_cast<int>(v.chart));
            os << buf;
        }
        for (const auto& t : m.tris) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    } else {
        throw std::invalid_argument("save_mesh: format must be obj or ply");
    }
    os.close();

    json side;
    side["R"] = m.amb.R;
    side["kappa"] = kappa;
    side["embedded_view"] = embedded_view;
    side["charts"] = json::array();
    for (const auto& v : m.verts) side["charts"].push_back(static_cast<int>(v.chart));
    side["pairing"] = m.pairing;
    side["fixed_on_Y"] = json::array();
    for (auto f : m.fixed_on_Y) side["fixed_on_Y"].push_back(static_cast<int>(f));
    json pins = json::array();
    for (const auto& p : m.pins) pins.push_back({{"piece", p.piece}, {"param", p.param}});
    side["pins"] = pins;
    if (m.curve) {
        side["curve"] = {{"h", m.curve->h},
                         {"t", m.curve->t},
                         {"c_choice", m.curve->c_choice == CChoice::InH ? "in_H" : "orthogonal"},
                         {"sign_O", m.curve->sign_O},
                         {"sign_Ostar", m.curve->sign_Ostar}};
    }
    std::ofstream ms(path_no_ext + "." + format + ".meta.json");
    ms << side.dump(1) << "\n";
}

SymMesh load_mesh(const std::string& path_no_ext, const std::string& format) {
    const std::string path = path_no_ext + "." + format;
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_mesh: cannot open " + path);
    std::ifstream ms(path_no_ext + "." + format + ".meta.json");
    if (!ms) throw std::runtime_error("load_mesh: missing sidecar for " + path);
    json side;
    ms >> side;

    SymMesh m;
    m.amb.R = side.at("R").get<double>();
    if (side.value("embedded_view", false))
        throw std::runtime_error("load_mesh: embedded-view exports are for viewing only");
    std::string line;
    if (format == "obj") {
        while (std::getline(is, line)) {
            std::istringstream ss(line);
            std::string tag;
            ss >> tag;
            if (tag == "v") {
                ChartPoint p;
                ss >> p.x >> p.y >> p.z;
                m.verts.push_back(p);
            } else if (tag == "f") {
                std::array<int, 3> t{};
                ss >> t[0] >> t[1] >> t[2];
                m.tris.push_back({t[0] - 1, t[1] - 1, t[2] - 1});
            }
        }
    } else if (format == "ply") {
        int nv = 0, nf = 0;
        while (std::getline(is, line)) {
            std::istringstream ss(line);
            std::string a, b;
            ss >> a >> b;
            if (a == "element" && b == "vertex") ss >> nv;
            if (a == "element" && b == "face") ss >> nf;
            if (a == "end_header") break;
        }
        for (int i = 0; i < nv; ++i) {
            std::getline(is, line);
            std::istringstream ss(line);
            ChartPoint p;
            int chart;
            ss >> p.x >> p.y >> p.z >> chart;
            p.chart = static_cast<Chart>(chart);
            m.verts.push_back(p);
        }
        for (int i = 0; i < nf; ++i) {
            std::getline(is, line);
            std::istringstream ss(line);
            int k;
            std::array<int, 3> t{};
            ss >> k >> t[0] >> t[1] >> t[2];
            m.tris.push_back(t);
        }
    } else {
        throw std::invalid_argument("load_mesh: format must be obj or ply");
    }
    const auto& charts = side.at("charts");
    for (int v = 0; v < m.nv(); ++v)
        m.verts[v].chart = static_cast<Chart>(charts.at(v).get<int>());
    m.pairing = side.at("pairing").get<std::vector<int>>();
    for (auto f : side.at("fixed_on_Y")) m.fixed_on_Y.push_back(static_cast<std::uint8_t>(f.get<int>()));
    for (const auto& p : side.at("pins")) m.pins.push_back({p.at("piece").get<int>(), p.at("param").get<double>()});
    return m;
}

}  // namespace helixlab
