#pragma once

// Finite parity games, min-parity convention: Even wins a play iff the least
// priority seen infinitely often is even.

#include <cstdint>
#include <vector>

namespace wadge {

enum class Player : std::uint8_t { Even = 0, Odd = 1 };

inline Player opponent(Player p) { return p == Player::Even ? Player::Odd : Player::Even; }

class GameArena {
public:
  std::uint32_t add_vertex(Player owner, unsigned priority);
  void add_edge(std::uint32_t from, std::uint32_t to);

  std::size_t size() const { return owner_.size(); }
  Player owner(std::uint32_t v) const { return owner_[v]; }
  unsigned priority(std::uint32_t v) const { return priority_[v]; }
  const std::vector<std::uint32_t>& successors(std::uint32_t v) const { return edges_[v]; }

  /// Throws std::logic_error when some vertex has no successor.
  void validate() const;

private:
  std::vector<Player> owner_;
  std::vector<unsigned> priority_;
  std::vector<std::vector<std::uint32_t>> edges_;
};

struct GameSolution {
  std::vector<Player> winner;
  /// For every vertex a successor chosen by its owner; winning for the owner
  /// whenever the owner wins from that vertex.
  std::vector<std::uint32_t> strategy;

  bool even_wins(std::uint32_t v) const { return winner[v] == Player::Even; }
};

/// Zielonka's recursive algorithm. Output depends only on the arena.
GameSolution solve_parity_game(const GameArena& arena);

}  // namespace wadge
