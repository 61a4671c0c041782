#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "trefftz/types.hpp"

namespace trefftz
{

inline constexpr std::size_t kNoElement = std::numeric_limits<std::size_t>::max();

struct Triangle
{
  std::array<std::size_t, 3> vertex_ids;  // counterclockwise
  double diameter = 0.0;
};

/// Mesh facet. Endpoints are ordered so that v0 -> v1 runs counterclockwise
/// around `left_elem`; `normal` points out of `left_elem`.
struct Edge
{
  std::array<std::size_t, 2> endpoint_ids;
  std::size_t left_elem = kNoElement;
  std::size_t right_elem = kNoElement;
  Vec2 normal;
  double length = 0.0;

  bool on_boundary() const { return right_elem == kNoElement; }
};

class MeshParseError : public Error
{
public:
  using Error::Error;
};

/// Hanging nodes, facets shared by more than two elements, repeated elements.
class NonConformingMeshError : public Error
{
public:
  using Error::Error;
};

/// Clockwise or degenerate triangles.
class MeshOrientationError : public Error
{
public:
  using Error::Error;
};

/// Conforming 2D triangulation with derived skeleton connectivity. Immutable
/// after construction.
class Mesh
{
public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<std::size_t, 3>> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_elements() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Vec2> &vertices() const { return vertices_; }
  const std::vector<Triangle> &triangles() const { return triangles_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const std::vector<std::size_t> &boundary_edges() const { return boundary_edges_; }
  std::size_t num_interior_edges() const { return edges_.size() - boundary_edges_.size(); }

  const Vec2 &vertex(std::size_t i) const { return vertices_[i]; }
  const Triangle &triangle(std::size_t k) const { return triangles_[k]; }
  const Edge &edge(std::size_t e) const { return edges_[e]; }

  /// The three edges of element k, edge j opposite to local vertex j.
  const std::array<std::size_t, 3> &element_edges(std::size_t k) const { return elem_edges_[k]; }

  std::array<Vec2, 3> corners(std::size_t k) const;
  Vec2 centroid(std::size_t k) const;
  double area(std::size_t k) const;

  /// Unit normal of edge e pointing out of element k (k must be adjacent).
  Vec2 outward_normal(std::size_t e, std::size_t k) const;

  /// Neighbour of k across edge e, or kNoElement on the boundary.
  std::size_t neighbour(std::size_t e, std::size_t k) const;

  /// Bounding box as (lower, upper).
  std::array<Vec2, 2> bounding_box() const;

private:
  void build_connectivity();

  std::vector<Vec2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<std::size_t, 3>> elem_edges_;
  std::vector<std::size_t> boundary_edges_;
};

/// Structured nx x ny rectangle split into 2 triangles per cell. Interior
/// vertices are displaced by up to `jitter` times the cell size with a seeded
/// generator; boundary vertices never move.
Mesh build_rect_mesh(Vec2 lower, Vec2 upper, int nx, int ny, double jitter,
                     std::uint64_t seed = 1);

Mesh parse_mesh(std::istream &in);
Mesh load_mesh(const std::filesystem::path &path);
void write_mesh(const Mesh &mesh, std::ostream &out);
void save_mesh(const Mesh &mesh, const std::filesystem::path &path);

double element_diameter(const Mesh &mesh, std::size_t elem_id);

/// Max pairwise distance of a point set.
double diameter_of(std::span<const Vec2> points);

}  // namespace trefftz
