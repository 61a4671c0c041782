#include "trefftz/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace trefftz
{

namespace
{

double signed_area(const Vec2 &a, const Vec2 &b, const Vec2 &c)
{
  return 0.5 * cross(b - a, c - a);
}

// Uniform double in [0, 1) from the raw 64-bit stream; independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64 &gen)
{
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::string_view strip_comment(std::string_view line)
{
  if (auto pos = line.find('#'); pos != std::string_view::npos)
  {
    line = line.substr(0, pos);
  }
  return line;
}

std::vector<std::string_view> split_tokens(std::string_view line)
{
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size())
  {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
    {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
    {
      ++j;
    }
    if (j > i)
    {
      tokens.push_back(line.substr(i, j - i));
    }
    i = j;
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no)
{
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
  {
    throw MeshParseError("line " + std::to_string(line_no) + ": cannot parse '" +
                         std::string(token) + "'");
  }
  return value;
}

void append_double(std::string &out, double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<std::size_t, 3>> triangles)
  : vertices_(std::move(vertices))
{
  triangles_.reserve(triangles.size());
  for (std::size_t k = 0; k < triangles.size(); ++k)
  {
    const auto &ids = triangles[k];
    for (auto id : ids)
    {
      if (id >= vertices_.size())
      {
        throw MeshParseError("triangle " + std::to_string(k) + " references vertex " +
                             std::to_string(id) + " out of range");
      }
    }
    if (ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2])
    {
      throw MeshOrientationError("triangle " + std::to_string(k) + " repeats a vertex");
    }
    const std::array<Vec2, 3> p = {vertices_[ids[0]], vertices_[ids[1]], vertices_[ids[2]]};
    const double diam = diameter_of(p);
    const double area = signed_area(p[0], p[1], p[2]);
    if (!(std::isfinite(area) && std::isfinite(diam)))
    {
      throw MeshParseError("triangle " + std::to_string(k) + " has non-finite coordinates");
    }
    if (area <= 1e-14 * diam * diam)
    {
      throw MeshOrientationError("triangle " + std::to_string(k) +
                                 (area < 0.0 ? " is clockwise" : " is degenerate"));
    }
    triangles_.push_back({ids, diam});
  }
  build_connectivity();
}

void Mesh::build_connectivity()
{
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  elem_edges_.assign(triangles_.size(), {});
  for (std::size_t k = 0; k < triangles_.size(); ++k)
  {
    const auto &ids = triangles_[k].vertex_ids;
    for (int j = 0; j < 3; ++j)
    {
      const std::size_t a = ids[(j + 1) % 3];
      const std::size_t b = ids[(j + 2) % 3];
      const auto key = std::minmax(a, b);
      auto it = lookup.find(key);
      if (it == lookup.end())
      {
        Edge e;
        e.endpoint_ids = {a, b};
        e.left_elem = k;
        const Vec2 t = vertices_[b] - vertices_[a];
        e.length = norm(t);
        e.normal = Vec2{t.y, -t.x} * (1.0 / e.length);
        lookup.emplace(key, edges_.size());
        elem_edges_[k][j] = edges_.size();
        edges_.push_back(e);
        continue;
      }
      Edge &e = edges_[it->second];
      if (e.right_elem != kNoElement)
      {
        throw NonConformingMeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                     ") is shared by more than two triangles");
      }
      if (e.endpoint_ids[0] == a)
      {
        throw NonConformingMeshError("triangles " + std::to_string(e.left_elem) + " and " +
                                     std::to_string(k) + " overlap along edge (" +
                                     std::to_string(a) + "," + std::to_string(b) + ")");
      }
      e.right_elem = k;
      elem_edges_[k][j] = it->second;
    }
  }

  for (std::size_t e = 0; e < edges_.size(); ++e)
  {
    if (edges_[e].on_boundary())
    {
      boundary_edges_.push_back(e);
    }
  }

  // A vertex lying inside a boundary facet is a hanging node.
  for (auto e : boundary_edges_)
  {
    const Vec2 &p0 = vertices_[edges_[e].endpoint_ids[0]];
    const Vec2 &p1 = vertices_[edges_[e].endpoint_ids[1]];
    const Vec2 t = p1 - p0;
    const double len2 = dot(t, t);
    for (std::size_t v = 0; v < vertices_.size(); ++v)
    {
      if (v == edges_[e].endpoint_ids[0] || v == edges_[e].endpoint_ids[1])
      {
        continue;
      }
      const Vec2 r = vertices_[v] - p0;
      const double s = dot(r, t) / len2;
      if (s > 1e-12 && s < 1.0 - 1e-12 && std::abs(cross(t, r)) <= 1e-12 * len2)
      {
        throw NonConformingMeshError("hanging node " + std::to_string(v) + " on edge (" +
                                     std::to_string(edges_[e].endpoint_ids[0]) + "," +
                                     std::to_string(edges_[e].endpoint_ids[1]) + ")");
      }
    }
  }
}

std::array<Vec2, 3> Mesh::corners(std::size_t k) const
{
  const auto &ids = triangles_[k].vertex_ids;
  return {vertices_[ids[0]], vertices_[ids[1]], vertices_[ids[2]]};
}

Vec2 Mesh::centroid(std::size_t k) const
{
  const auto c = corners(k);
  return (1.0 / 3.0) * (c[0] + c[1] + c[2]);
}

double Mesh::area(std::size_t k) const
{
  const auto c = corners(k);
  return signed_area(c[0], c[1], c[2]);
}

Vec2 Mesh::outward_normal(std::size_t e, std::size_t k) const
{
  const Edge &edge = edges_[e];
  if (edge.left_elem == k)
  {
    return edge.normal;
  }
  if (edge.right_elem == k)
  {
    return -edge.normal;
  }
  throw ArgumentError("element " + std::to_string(k) + " is not adjacent to edge " +
                      std::to_string(e));
}

std::size_t Mesh::neighbour(std::size_t e, std::size_t k) const
{
  const Edge &edge = edges_[e];
  return edge.left_elem == k ? edge.right_elem : edge.left_elem;
}

std::array<Vec2, 2> Mesh::bounding_box() const
{
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi = -lo;
  for (const auto &v : vertices_)
  {
    lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
    hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
  }
  return {lo, hi};
}

Mesh build_rect_mesh(Vec2 lower, Vec2 upper, int nx, int ny, double jitter, std::uint64_t seed)
{
  if (!(upper.x > lower.x && upper.y > lower.y))
  {
    throw ArgumentError("build_rect_mesh: degenerate rectangle");
  }
  if (nx < 1 || ny < 1)
  {
    throw ArgumentError("build_rect_mesh: nx and ny must be at least 1");
  }
  if (!(jitter >= 0.0 && jitter < 0.5))
  {
    throw ArgumentError("build_rect_mesh: jitter must lie in [0, 0.5)");
  }

  const double hx = (upper.x - lower.x) / nx;
  const double hy = (upper.y - lower.y) / ny;
  std::mt19937_64 gen(seed);

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
  {
    for (int i = 0; i <= nx; ++i)
    {
      Vec2 p{i == nx ? upper.x : lower.x + i * hx, j == ny ? upper.y : lower.y + j * hy};
      const double ux = unit_uniform(gen);
      const double uy = unit_uniform(gen);
      if (i > 0 && i < nx && j > 0 && j < ny && jitter > 0.0)
      {
        p += Vec2{jitter * hx * (2.0 * ux - 1.0), jitter * hy * (2.0 * uy - 1.0)};
      }
      vertices.push_back(p);
    }
  }

  auto id = [nx](int i, int j) { return static_cast<std::size_t>(j * (nx + 1) + i); };
  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      const std::size_t a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      const Vec2 &pa = vertices[a], &pb = vertices[b], &pc = vertices[c], &pd = vertices[d];
      // Pick the diagonal whose smaller triangle is larger; ties keep a-c.
      const double min_ac = std::min(signed_area(pa, pb, pc), signed_area(pa, pc, pd));
      const double min_bd = std::min(signed_area(pa, pb, pd), signed_area(pb, pc, pd));
      if (min_bd > min_ac * (1.0 + 1e-12))
      {
        triangles.push_back({a, b, d});
        triangles.push_back({b, c, d});
      }
      else
      {
        triangles.push_back({a, b, c});
        triangles.push_back({a, c, d});
      }
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh parse_mesh(std::istream &in)
{
  std::string line;
  std::size_t line_no = 0;
  auto next_tokens = [&]() -> std::vector<std::string_view> {
    while (std::getline(in, line))
    {
      ++line_no;
      auto tokens = split_tokens(strip_comment(line));
      if (!tokens.empty())
      {
        return tokens;
      }
    }
    throw MeshParseError("unexpected end of file after line " + std::to_string(line_no));
  };

  auto header = next_tokens();
  if (header.size() != 3 || header[0] != "ntv")
  {
    throw MeshParseError("line " + std::to_string(line_no) + ": expected 'ntv <nv> <nt>'");
  }
  const auto nv = parse_number<std::size_t>(header[1], line_no);
  const auto nt = parse_number<std::size_t>(header[2], line_no);

  std::vector<Vec2> vertices;
  vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i)
  {
    auto tok = next_tokens();
    if (tok.size() != 2)
    {
      throw MeshParseError("line " + std::to_string(line_no) + ": expected 'x y'");
    }
    vertices.push_back({parse_number<double>(tok[0], line_no), parse_number<double>(tok[1], line_no)});
  }
  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(nt);
  for (std::size_t k = 0; k < nt; ++k)
  {
    auto tok = next_tokens();
    if (tok.size() != 3)
    {
      throw MeshParseError("line " + std::to_string(line_no) + ": expected 'i j k'");
    }
    triangles.push_back({parse_number<std::size_t>(tok[0], line_no),
                         parse_number<std::size_t>(tok[1], line_no),
                         parse_number<std::size_t>(tok[2], line_no)});
  }
  while (std::getline(in, line))
  {
    ++line_no;
    if (!split_tokens(strip_comment(line)).empty())
    {
      throw MeshParseError("line " + std::to_string(line_no) + ": trailing data");
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh load_mesh(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw MeshParseError("cannot open mesh file " + path.string());
  }
  return parse_mesh(in);
}

void write_mesh(const Mesh &mesh, std::ostream &out)
{
  std::string text = "ntv " + std::to_string(mesh.num_vertices()) + " " +
                     std::to_string(mesh.num_elements()) + "\n";
  for (const auto &v : mesh.vertices())
  {
    append_double(text, v.x);
    text += ' ';
    append_double(text, v.y);
    text += '\n';
  }
  for (const auto &t : mesh.triangles())
  {
    text += std::to_string(t.vertex_ids[0]) + " " + std::to_string(t.vertex_ids[1]) + " " +
            std::to_string(t.vertex_ids[2]) + "\n";
  }
  out << text;
}

void save_mesh(const Mesh &mesh, const std::filesystem::path &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write mesh file " + path.string());
  }
  write_mesh(mesh, out);
}

double element_diameter(const Mesh &mesh, std::size_t elem_id)
{
  return mesh.triangle(elem_id).diameter;
}

double diameter_of(std::span<const Vec2> points)
{
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
  {
    for (std::size_t j = i + 1; j < points.size(); ++j)
    {
      d = std::max(d, norm(points[i] - points[j]));
    }
  }
  return d;
}

}  // namespace trefftz
