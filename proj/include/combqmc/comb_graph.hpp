#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace combqmc {

/// A vertex (k, l) of the comb graph: k runs along the spine, l up the tooth
/// attached at spine position k. The root is (0, 0).
struct Vertex {
  unsigned k = 0;
  unsigned l = 0;

  /// Graph distance to the root.
  unsigned level() const { return k + l; }
  bool on_spine() const { return l == 0; }

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

std::string to_string(const Vertex& v);

enum class VertexClass {
  L1,  // one direct successor (tooth vertices)
  L2,  // two direct successors (spine vertices)
};

using Support = std::vector<Vertex>;

/// Vertices at distance n from the root, ordered (n,0), (n-1,1), ..., (0,n).
struct Level {
  unsigned n = 0;
  std::vector<Vertex> vertices;
};

/// Direct successors. Spine vertices return [v+e1, v+e2] in that order.
std::vector<Vertex> successors(const Vertex& v);

VertexClass classify(const Vertex& v);

Level level(unsigned n);

/// Concatenation level(0), ..., level(n).
std::vector<Vertex> volume(unsigned n);

constexpr std::size_t volume_size(unsigned n) {
  return static_cast<std::size_t>(n + 1) * (n + 2) / 2;
}

/// Spine translation u -> u + n e1.
Vertex translate(const Vertex& v, unsigned n);

}  // namespace combqmc
