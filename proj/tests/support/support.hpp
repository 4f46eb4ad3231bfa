#pragma once

// Independent oracles and generators for the test suites. Nothing here
// calls the solver; everything is enumeration.

#include "pogen/circuit.hpp"
#include "pogen/logic.hpp"
#include "pogen/transition_system.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace pogen::test
{

using Rng = std::mt19937_64;

// Reads a file below the source tree's fixtures/ directory.
std::string fixture( const std::string& name );

Cnf random_cnf( Rng& rng, int vars, int clauses, int max_width );

// Truth-table evaluation: all models over 1..vars.
std::vector< Assignment > all_models( const Cnf& f, int vars );
bool brute_sat( const Cnf& f, int vars );

// Random AIG with the given shape. Latch next functions and bad/constraint
// literals are drawn from all nodes.
Circuit random_circuit( Rng& rng, int latches, int inputs, int gates, int constraints = 0,
                        bool random_init = true );

using Bits = std::vector< bool >;

// Successors of a circuit state under all inputs, honoring constraints.
struct CircuitStep
{
    Bits input;
    Bits next;
    bool bad = false;
};

std::vector< CircuitStep > circuit_steps( const Circuit& c, const Bits& state );

// Explicit-state reachability: length (number of transitions) of the
// shortest path to a bad state, or nullopt when safe.
std::optional< int > bfs_bad_depth( const Circuit& c );

// Reachable states, each as a bit vector over latches.
std::set< Bits > reachable_states( const Circuit& c );

// Every (s, i, s′) of a transition system's T (including the constraint),
// found by enumerating all of T's variables. Only for tiny systems.
using Transition = std::tuple< Bits, Bits, Bits >;
std::set< Transition > enumerate_transitions( const TransitionSystem& ts );

// Explicit-state reachability over the CNF predicates of a tiny system.
std::optional< int > bfs_bad_depth( const TransitionSystem& ts );

// Value of a cube/cnf over state bits (index k = state[k]).
bool holds_on_state( const TransitionSystem& ts, const Cnf& f, const Bits& state );

// Truth value of ∃outer ∀universal ∃rest : f with the outer block taken
// from `fixed`, by expansion.
bool qbf_holds_for( const Cnf& f, int vars, const std::vector< Var >& outer, const std::vector< Var >& universal,
                    const Assignment& fixed );

// All outer assignments (as full assignments) for which the QBF holds.
std::vector< Assignment > valid_outer( const Cnf& f, int vars, const std::vector< Var >& outer,
                                       const std::vector< Var >& universal );

Bits bits_of( std::uint64_t value, std::size_t width );

} // namespace pogen::test
