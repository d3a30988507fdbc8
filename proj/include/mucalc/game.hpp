#pragma once

#include "mucalc/formula.hpp"
#include "mucalc/model.hpp"

namespace mucalc {

// Priorities over CL(f): fixpoint unfoldings get mu-odd/nu-even ranks that
// weakly grow outward along the subformula order; everything else rank 0.
struct RankFunction {
  std::map<std::string, int> by_alpha_key;
  int rank_of(const Formula& f) const {
    auto it = by_alpha_key.find(f.alpha_key());
    return it == by_alpha_key.end() ? 0 : it->second;
  }
};

RankFunction rank_function(const Formula& f);

enum class Player { Eva, Adam };

inline Player opponent(Player p) { return p == Player::Eva ? Player::Adam : Player::Eva; }

// Model-checking arena: one position per (state, closure formula).  A player
// with no available move loses; infinite plays go to Eva iff the maximum
// priority seen infinitely often is even.
struct ParityGame {
  const KripkeModel* model = nullptr;
  std::vector<Formula> cl;          // closure formulas, index = formula part
  std::vector<Player> owner;        // per position
  std::vector<int> priority;        // per position
  std::vector<std::vector<int>> edges;
  int num_cl = 0;

  int position(int state, int cl_index) const { return state * num_cl + cl_index; }
  int state_of(int pos) const { return pos / num_cl; }
  int cl_of(int pos) const { return pos % num_cl; }
  std::size_t size() const { return owner.size(); }
};

ParityGame build_game(const KripkeModel& m, const Formula& f);

struct GameSolution {
  std::vector<Player> winner;   // per position
  std::vector<int> strategy;    // winning player's positional move, -1 if none
};

GameSolution solve(const ParityGame& g);

bool model_check_via_game(const KripkeModel& m, const std::string& state,
                          const Formula& f);

std::string dump_game(const ParityGame& g);

}  // namespace mucalc
