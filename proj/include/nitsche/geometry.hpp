#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "nitsche/interface.hpp"
#include "nitsche/mesh.hpp"
#include "nitsche/quadrature.hpp"
#include "nitsche/types.hpp"

namespace nitsche {

enum class ElementKind : std::uint8_t { Interior1, Interior2, Cut };

constexpr ElementKind interior_kind(Side s) {
  return s == Side::One ? ElementKind::Interior1 : ElementKind::Interior2;
}

struct Classification {
  std::vector<ElementKind> kind;
  /// Per-vertex side after snapping: -1 for side One, +1 for side Two.
  std::vector<signed char> vertex_sign;
  std::vector<int> cut_elements;
  std::array<std::vector<int>, 2> strict;  // interior elements of each side
  std::array<std::vector<int>, 2> covers;  // strict[s] plus the cut elements

  bool is_cut(int t) const { return kind[t] == ElementKind::Cut; }
  bool touches(int t, Side s) const { return kind[t] == ElementKind::Cut || kind[t] == interior_kind(s); }
};

/// Rebuilds the index lists from `kind`.
void rebuild_lists(Classification& c);

/// Result of the per-edge sign-change scan.
struct AssumptionReport {
  bool ok = true;
  std::vector<int> elements;        // violating triangles, ascending
  std::vector<int> edges;           // edges with more than one crossing
  std::vector<std::uint8_t> edge_crossings;
};

/// Snapped vertex signs: a vertex with |phi| < 1e-10 h takes the sign of the
/// summed phi at the centroids of its triangles (ties go to side Two).
std::vector<signed char> snapped_vertex_signs(const Mesh& mesh, const Interface& iface);

/// Counts sign changes of phi along each edge (64 interior samples plus the
/// snapped endpoint signs) and checks that every mixed-sign element is crossed
/// exactly twice, at most once per edge, and every other element not at all.
AssumptionReport audit_interface(const Mesh& mesh, const Interface& iface);
AssumptionReport audit_interface(const Mesh& mesh, const Interface& iface,
                                 std::span<const signed char> vertex_sign);

/// Tags every triangle from the snapped vertex signs. Throws
/// AssumptionViolation when the audit fails.
Classification classify_elements(const Mesh& mesh, const Interface& iface);

/// Root of phi on [p0, p1] with |phi| <= 1e-12 |p1 - p0|, by bisection from
/// the lexicographically smaller endpoint. `s0`, `s1` are the effective signs
/// of the endpoints (they must differ). Throws NoConvergence after 200 steps.
Point2 edge_intersection(Point2 p0, Point2 p1, const Interface& iface, int s0, int s1);
/// Same, with the signs taken from phi itself.
Point2 edge_intersection(Point2 p0, Point2 p1, const Interface& iface);

/// Up to four vertices.
struct SmallPolygon {
  std::array<Point2, 4> p{};
  int n = 0;
  std::span<const Point2> points() const { return {p.data(), static_cast<std::size_t>(n)}; }
};

/// Straight-chord geometry of one cut element.
struct CutInfo {
  int element = -1;
  int iso_vertex = 0;         // local index of the vertex alone on its side
  Side iso_side = Side::One;  // the side of that vertex
  Point2 entry;               // crossing on local edge (iso, iso+1)
  Point2 exit;                // crossing on local edge (iso+2, iso)
  std::array<SmallPolygon, 2> poly;
  std::array<double, 2> area{};
  double chord_len = 0.0;
  Vec2 normal;  // unit, from side One into side Two
  double kappa1 = 0.5, kappa2 = 0.5;
  double gamma = 0.0;  // 2 l chord / (area1/beta1 + area2/beta2), l the shortest edge
  double h = 0.0;  // element diameter
};

/// Throws DegenerateCut when the smaller part is below 1e-12 |T|.
CutInfo cut_info(const Mesh& mesh, const Classification& cls, int t, const Interface& iface,
                 const ScalarField& beta1, const ScalarField& beta2);

/// A straight piece of the discrete interface with the data needed by the
/// Nitsche terms. For a cut element both traces live on the same triangle;
/// when the interface runs along a mesh edge the traces come from the two
/// triangles sharing it.
struct InterfaceSegment {
  std::array<int, 2> element{-1, -1};  // triangle carrying the side One / side Two trace
  Point2 a, b;
  Vec2 normal;
  double length = 0.0;
  double kappa1 = 0.5, kappa2 = 0.5;
  double gamma = 0.0;
  double h = 0.0;
};

/// Everything the discretisation needs to know about the interface on one mesh.
struct CutGeometry {
  Classification classification;
  std::vector<CutInfo> cuts;        // one per cut element, in cut_elements order
  std::vector<int> cut_index;       // per triangle, index into cuts or -1
  std::vector<InterfaceSegment> segments;
  int reclassified = 0;             // tiny cuts moved to the majority side
};

/// Classifies, computes cut data, folds tiny cuts into the majority side and
/// collects interface segments (including mesh edges separating the sides).
CutGeometry build_cut_geometry(const Mesh& mesh, const Interface& iface, const ScalarField& beta1,
                               const ScalarField& beta2);

/// Weighted quadrature over the two sides of a cut element with the chord
/// replaced by `subdivisions` sub-chords whose interior knots are projected
/// onto the interface along the chord normal. Index 0 is side One.
std::array<QuadRule, 2> curved_error_quadrature(const Mesh& mesh, const CutInfo& cut, const Interface& iface,
                                                int subdivisions, int order = 6,
                                                FanOrigin origin = FanOrigin::Centroid);

/// Number of knot projections that fell back to the straight chord so far.
long curved_projection_failures();

}  // namespace nitsche
