#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include "fsi/format.hpp"

namespace fsi {

std::string to_string(EdgeClass c)
{
    switch (c) {
    case EdgeClass::Interior: return "interior";
    case EdgeClass::Top: return "top";
    case EdgeClass::Bottom: return "bottom";
    case EdgeClass::Left: return "left";
    case EdgeClass::Right: return "right";
    }
    return "?";
}

int ReferenceMesh::local_edge(int c, int e) const
{
    for (int i = 0; i < 3; ++i)
        if (cells[c].e[i] == e) return i;
    throw std::logic_error("edge does not belong to cell");
}

ReferenceMesh mesh_from_triangles(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> tris,
                                  double L, double H)
{
    ReferenceMesh m;
    m.L = L;
    m.H = H;
    m.vertices = std::move(vertices);
    const double tol = 1e-12 * std::max(L, H);

    for (const auto& v : m.vertices)
        if (std::abs(v.y() - H) <= tol) m.knots.push_back(v.x());
    std::sort(m.knots.begin(), m.knots.end());
    m.knots.erase(std::unique(m.knots.begin(), m.knots.end(),
                              [&](double a, double b) { return std::abs(a - b) <= tol; }),
                  m.knots.end());
    if (m.knots.size() < 2 || std::abs(m.knots.front()) > tol || std::abs(m.knots.back() - L) > tol)
        throw std::invalid_argument("top boundary vertices must span [0, L]");
    m.knots.front() = 0.0;
    m.knots.back() = L;

    m.vertex_knot.resize(m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        const double x = m.vertices[i].x();
        auto it = std::lower_bound(m.knots.begin(), m.knots.end(), x - tol);
        if (it == m.knots.end() || std::abs(*it - x) > tol)
            throw std::invalid_argument("vertex off the knot lines");
        m.vertex_knot[i] = static_cast<int>(it - m.knots.begin());
    }

    std::map<std::pair<int, int>, int> index;
    for (const auto& t : tris) {
        const Vec2 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
        const double area = 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
        if (!(area > 0.0)) throw std::invalid_argument("triangle not counterclockwise");
        Cell cell;
        cell.v = t;
        const int cid = static_cast<int>(m.cells.size());
        for (int i = 0; i < 3; ++i) {
            int p = t[(i + 1) % 3], q = t[(i + 2) % 3];
            auto key = std::minmax(p, q);
            auto it = index.find(key);
            if (it == index.end()) {
                Edge e;
                e.v = {p, q};
                e.cell = {cid, -1};
                index.emplace(key, static_cast<int>(m.edges.size()));
                cell.e[i] = static_cast<int>(m.edges.size());
                m.edges.push_back(e);
            } else {
                if (m.edges[it->second].cell[1] != -1) throw std::invalid_argument("non-manifold edge");
                m.edges[it->second].cell[1] = cid;
                cell.e[i] = it->second;
            }
        }
        int kmin = m.vertex_knot[t[0]], kmax = kmin;
        for (int v : t) {
            kmin = std::min(kmin, m.vertex_knot[v]);
            kmax = std::max(kmax, m.vertex_knot[v]);
        }
        if (kmax - kmin != 1) throw std::invalid_argument("triangle spans more than one column");
        cell.column = kmin;
        m.cells.push_back(cell);
        m.cell_area.push_back(area);
        m.h = std::max({m.h, (b - a).norm(), (c - b).norm(), (a - c).norm()});
    }

    for (auto& e : m.edges) {
        const Vec2 &p = m.vertices[e.v[0]], &q = m.vertices[e.v[1]];
        m.edge_length.push_back((q - p).norm());
        if (e.cell[1] != -1) continue;
        if (std::abs(p.y() - H) <= tol && std::abs(q.y() - H) <= tol)
            e.cls = EdgeClass::Top;
        else if (std::abs(p.y()) <= tol && std::abs(q.y()) <= tol)
            e.cls = EdgeClass::Bottom;
        else if (std::abs(p.x()) <= tol && std::abs(q.x()) <= tol)
            e.cls = EdgeClass::Left;
        else if (std::abs(p.x() - L) <= tol && std::abs(q.x() - L) <= tol)
            e.cls = EdgeClass::Right;
        else
            throw std::invalid_argument("boundary edge not on the rectangle");
    }

    for (int i = 0; i < m.num_edges(); ++i)
        if (m.edges[i].cls == EdgeClass::Top) m.top_edges.push_back(i);
    std::sort(m.top_edges.begin(), m.top_edges.end(), [&](int a, int b) {
        return m.cells[m.edges[a].cell[0]].column < m.cells[m.edges[b].cell[0]].column;
    });
    if (m.top_edges.size() + 1 != m.knots.size()) throw std::invalid_argument("top boundary is not a single chain");
    return m;
}

ReferenceMesh build_reference_mesh(double L, double H, int nx, int ny)
{
    if (nx < 2 || ny < 2) throw std::invalid_argument("mesh needs nx >= 2 and ny >= 2");
    if (!(L > 0.0) || !(H > 0.0)) throw std::invalid_argument("mesh needs positive extents");
    std::vector<Vec2> verts;
    verts.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.emplace_back(i == nx ? L : L * i / nx, j == ny ? H : H * j / ny);
    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            if (2 * i < nx) {
                tris.push_back({a, b, c});
                tris.push_back({a, c, d});
            } else {
                tris.push_back({a, b, d});
                tris.push_back({b, c, d});
            }
        }
    return mesh_from_triangles(std::move(verts), std::move(tris), L, H);
}

void write_mesh_snapshot(std::ostream& os, const ReferenceMesh& m, const std::vector<Vec2>* positions)
{
    const auto& X = positions ? *positions : m.vertices;
    os << "VERTICES " << X.size() << "\n";
    for (std::size_t i = 0; i < X.size(); ++i)
        os << i << " " << fmt17(X[i].x()) << " " << fmt17(X[i].y()) << "\n";
    os << "CELLS " << m.cells.size() << "\n";
    for (std::size_t i = 0; i < m.cells.size(); ++i)
        os << i << " " << m.cells[i].v[0] << " " << m.cells[i].v[1] << " " << m.cells[i].v[2] << "\n";
    os << "EDGE_CLASS " << m.edges.size() << "\n";
    for (std::size_t i = 0; i < m.edges.size(); ++i)
        os << i << " " << m.edges[i].v[0] << " " << m.edges[i].v[1] << " " << to_string(m.edges[i].cls) << "\n";
}

}  // namespace fsi
