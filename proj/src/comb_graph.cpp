#include "combqmc/comb_graph.hpp"

namespace combqmc {

std::string to_string(const Vertex& v) {
  return "(" + std::to_string(v.k) + "," + std::to_string(v.l) + ")";
}

std::vector<Vertex> successors(const Vertex& v) {
  if (v.on_spine()) {
    return {Vertex{v.k + 1, 0}, Vertex{v.k, 1}};
  }
  return {Vertex{v.k, v.l + 1}};
}

VertexClass classify(const Vertex& v) {
  return v.on_spine() ? VertexClass::L2 : VertexClass::L1;
}

Level level(unsigned n) {
  Level out;
  out.n = n;
  out.vertices.reserve(n + 1);
  for (unsigned j = 0; j <= n; ++j) {
    out.vertices.push_back(Vertex{n - j, j});
  }
  return out;
}

std::vector<Vertex> volume(unsigned n) {
  std::vector<Vertex> out;
  out.reserve(volume_size(n));
  for (unsigned m = 0; m <= n; ++m) {
    const auto lv = level(m);
    out.insert(out.end(), lv.vertices.begin(), lv.vertices.end());
  }
  return out;
}

Vertex translate(const Vertex& v, unsigned n) { return Vertex{v.k + n, v.l}; }

}  // namespace combqmc
