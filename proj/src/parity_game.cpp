#include "wadge/parity_game.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace wadge {

std::uint32_t GameArena::add_vertex(Player owner, unsigned priority) {
  owner_.push_back(owner);
  priority_.push_back(priority);
  edges_.emplace_back();
  return static_cast<std::uint32_t>(owner_.size() - 1);
}

void GameArena::add_edge(std::uint32_t from, std::uint32_t to) {
  if (from >= size() || to >= size()) throw std::out_of_range("edge endpoint out of range");
  edges_[from].push_back(to);
}

void GameArena::validate() const {
  for (std::size_t v = 0; v < size(); ++v)
    if (edges_[v].empty()) throw std::logic_error("vertex " + std::to_string(v) + " has no successor");
}

namespace {

constexpr std::uint32_t kNoMove = std::numeric_limits<std::uint32_t>::max();

class Zielonka {
public:
  explicit Zielonka(const GameArena& g) : g_(g), pred_(g.size()), count_(g.size(), 0) {
    for (std::uint32_t v = 0; v < g.size(); ++v)
      for (auto w : g.successors(v)) pred_[w].push_back(v);
    out_.winner.assign(g.size(), Player::Even);
    out_.strategy.assign(g.size(), kNoMove);
  }

  GameSolution run() {
    std::vector<std::uint32_t> all(g_.size());
    for (std::uint32_t v = 0; v < g_.size(); ++v) all[v] = v;
    std::vector<char> in(g_.size(), 1);
    solve(all, in);
    for (std::uint32_t v = 0; v < g_.size(); ++v)
      if (out_.strategy[v] == kNoMove) out_.strategy[v] = g_.successors(v).front();
    return out_;
  }

private:
  // Attractor for `p` to `target` inside the subgame `in`. Sets strategy for
  // attracted vertices owned by p. Returns the attractor (target included).
  std::vector<std::uint32_t> attractor(const std::vector<std::uint32_t>& sub, const std::vector<char>& in,
                                       std::vector<std::uint32_t> target, Player p, std::vector<char>& mark) {
    for (auto v : sub) {
      count_[v] = 0;
      for (auto w : g_.successors(v))
        if (in[w]) ++count_[v];
    }
    for (auto v : target) mark[v] = 1;
    std::size_t head = 0;
    while (head < target.size()) {
      const auto w = target[head++];
      for (auto v : pred_[w]) {
        if (!in[v] || mark[v]) continue;
        if (g_.owner(v) == p) {
          mark[v] = 1;
          out_.strategy[v] = w;
          target.push_back(v);
        } else if (--count_[v] == 0) {
          mark[v] = 1;
          target.push_back(v);
        }
      }
    }
    return target;
  }

  void solve(const std::vector<std::uint32_t>& sub, std::vector<char>& in) {
    if (sub.empty()) return;
    unsigned p = std::numeric_limits<unsigned>::max();
    for (auto v : sub) p = std::min(p, g_.priority(v));
    const Player i = (p % 2 == 0) ? Player::Even : Player::Odd;
    std::vector<std::uint32_t> top;
    for (auto v : sub)
      if (g_.priority(v) == p) top.push_back(v);

    std::vector<char> mark(g_.size(), 0);
    auto a = attractor(sub, in, top, i, mark);
    std::vector<std::uint32_t> rest;
    for (auto v : sub)
      if (!mark[v]) rest.push_back(v);
    for (auto v : a) in[v] = 0;
    solve(rest, in);
    for (auto v : a) in[v] = 1;

    std::vector<std::uint32_t> lost;
    for (auto v : rest)
      if (out_.winner[v] != i) lost.push_back(v);
    if (lost.empty()) {
      for (auto v : a) out_.winner[v] = i;
      for (auto v : top) {
        if (g_.owner(v) != i) continue;
        for (auto w : g_.successors(v))
          if (in[w]) {
            out_.strategy[v] = w;
            break;
          }
      }
      return;
    }
    std::vector<char> mark2(g_.size(), 0);
    auto b = attractor(sub, in, lost, opponent(i), mark2);
    for (auto v : b) out_.winner[v] = opponent(i);
    std::vector<std::uint32_t> rest2;
    for (auto v : sub)
      if (!mark2[v]) rest2.push_back(v);
    for (auto v : b) in[v] = 0;
    solve(rest2, in);
    for (auto v : b) in[v] = 1;
  }

  const GameArena& g_;
  std::vector<std::vector<std::uint32_t>> pred_;
  std::vector<std::uint32_t> count_;
  GameSolution out_;
};

}  // namespace

GameSolution solve_parity_game(const GameArena& arena) {
  arena.validate();
  return Zielonka(arena).run();
}

}  // namespace wadge
