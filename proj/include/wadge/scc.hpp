#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace wadge {

/// Strongly connected components (iterative Tarjan). Component ids are
/// assigned in reverse topological order: a component only reaches
/// components with smaller or equal id.
struct SccDecomposition {
  std::vector<std::uint32_t> component;  // vertex -> component id
  std::uint32_t count = 0;
};

template <class Successors>
SccDecomposition tarjan_scc(std::size_t n, Successors&& successors) {
  constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
  SccDecomposition out;
  out.component.assign(n, kUnvisited);
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_index = 0;

  struct Frame {
    std::uint32_t v;
    std::vector<std::uint32_t> succ;
    std::size_t pos;
  };
  std::vector<Frame> call;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    auto push = [&](std::uint32_t v) {
      index[v] = low[v] = next_index++;
      stack.push_back(v);
      on_stack[v] = true;
      std::vector<std::uint32_t> succ;
      successors(v, succ);
      call.push_back(Frame{v, std::move(succ), 0});
    };
    push(root);
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.pos < f.succ.size()) {
        const std::uint32_t w = f.succ[f.pos++];
        if (index[w] == kUnvisited) {
          push(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.v;
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = out.count;
        } while (w != v);
        ++out.count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return out;
}

}  // namespace wadge
