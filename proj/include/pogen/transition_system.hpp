#pragma once

#include "pogen/circuit.hpp"
#include "pogen/encode.hpp"
#include "pogen/logic.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pogen
{

enum class Tri : std::uint8_t
{
    no,
    yes,
    unknown
};

struct Caps
{
    Tri right_unique = Tri::unknown;
    Tri left_total = Tri::unknown;
    Tri left_unique = Tri::unknown;
    Tri right_total = Tri::unknown;

    friend bool operator==( const Caps&, const Caps& ) = default;
};

enum class Origin : std::uint8_t
{
    circuit,
    circuit_constraint,
    dimspec,
    reversed
};

enum class ConstraintMode : std::uint8_t
{
    reject,
    self_loops,
    dead_end,
    keep_separate
};

std::string_view to_string( Tri t );
std::string_view to_string( Origin o );
std::string_view to_string( ConstraintMode m );
std::optional< ConstraintMode > parse_constraint_mode( std::string_view name );

class constrained_system_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// The circuit a system was built from, with its variable mapping.
struct CircuitLink
{
    Circuit circuit;
    TseitinEncoding encoding;
};

struct TransitionSystem
{
    std::vector< Var > state;
    std::vector< Var > input;
    std::vector< Var > next; // next[k] is the primed copy of state[k]

    Cnf init;
    Cnf bad; // may use private auxiliaries; ¬P(s) = ∃aux. bad
    Cnf trans;
    std::optional< Cnf > constraint; // T = trans ∧ constraint

    Caps caps;
    Origin origin = Origin::dimspec;
    Origin base_origin = Origin::dimspec;

    std::shared_ptr< const CircuitLink > circuit;

    Var num_vars = 0;

    // Position of v in state/next/input, or -1.
    int state_pos( Var v ) const { return lookup( _state_pos, v ); }
    int next_pos( Var v ) const { return lookup( _next_pos, v ); }
    int input_pos( Var v ) const { return lookup( _input_pos, v ); }

    // Recomputes the position tables and num_vars; call after editing.
    void index_vars();

    bool has_constraint() const { return constraint.has_value(); }
    bool reversed() const { return origin == Origin::reversed; }

    // Init as a cube when every init clause is a unit over state variables.
    std::optional< Cube > init_cube() const;

    // trans ∧ constraint
    Cnf full_trans() const;

    Lit primed( Lit state_lit ) const { return Lit{ next[ state_pos( state_lit.var() ) ], state_lit.negated() }; }
    Lit unprimed( Lit next_lit ) const { return Lit{ state[ next_pos( next_lit.var() ) ], next_lit.negated() }; }
    Cube primed( const Cube& c ) const;
    Cube unprimed( const Cube& c ) const;

private:
    static int lookup( const std::vector< int >& table, Var v )
    {
        return v > 0 && v < static_cast< Var >( table.size() ) ? table[ v ] : -1;
    }

    std::vector< int > _state_pos;
    std::vector< int > _next_pos;
    std::vector< int > _input_pos;
};

// Replaces the constraints by a multiplexer per latch that keeps the old
// value when they are violated.
Circuit repair_self_loops( const Circuit& c );

// Adds a dead-end latch entered by every constraint-violating step. Bad
// states require the constraints and exclude the dead end.
Circuit repair_dead_end( const Circuit& c );

TransitionSystem circuit_to_ts( const Circuit& c, ConstraintMode mode );

TransitionSystem parse_dimspec( std::string_view text );

// Swaps initial and bad states and the roles of s and s′ in T.
TransitionSystem reverse( const TransitionSystem& ts );

} // namespace pogen
