#pragma once

#include "pogen/circuit.hpp"
#include "pogen/logic.hpp"

#include <span>
#include <utility>
#include <vector>

namespace pogen
{

// CNF of a circuit's transition function. Variables: latches 1..L, inputs
// L+1..L+I, next state L+I+1..2L+I, then one per gate, then a constant-false
// variable if any literal refers to a constant.
struct TseitinEncoding
{
    Cnf cnf;
    std::vector< Var > state;
    std::vector< Var > input;
    std::vector< Var > next;
    std::vector< Var > node_var; // AIG var -> CNF var
    Var const_false = 0;

    Lit lit( AigLit l ) const
    {
        return Lit{ node_var[ l.var() ], l.negated() };
    }
};

TseitinEncoding tseitin( const Circuit& c );

struct Rail
{
    Var zero = 0; // set iff the signal is 0
    Var one = 0;  // set iff the signal is 1

    Rail flipped() const { return { one, zero }; }
    friend bool operator==( Rail, Rail ) = default;
};

// Two-rail (01X) encoding of every node of a circuit. (0,0) is X, (1,0) is 0,
// (0,1) is 1 and (1,1) is excluded.
struct TwoRailMap
{
    Cnf cnf;
    std::vector< Rail > rails; // per AIG var, including var 0

    Rail rail( AigLit l ) const { return l.negated() ? rails[ l.var() ].flipped() : rails[ l.var() ]; }
    Var num_vars() const { return cnf.num_vars(); }
};

TwoRailMap two_rail_encode( const Circuit& c );

// Literal-level two-rail substitution: every occurrence of v (¬v) for v in
// `vars` is replaced by v¹ (v⁰) with fresh rails numbered from `first_free`.
struct RailSubstitution
{
    Cnf cnf;
    std::vector< std::pair< Var, Rail > > rails;
    Var next_free = 0;

    Rail rail_of( Var v ) const;
};

RailSubstitution rail_substitute( const Cnf& f, std::span< const Var > vars, Var first_free );

// Rewrites `f` so that v becomes `rails.one` and ¬v becomes `rails.zero`
// for every mapped variable, leaving the rest untouched.
Cnf substitute_rails( const Cnf& f, const std::vector< std::pair< Var, Rail > >& rails );

// Clauses defining one selector per clause of `f`: a true selector forces
// its clause false. ¬f holds iff some selector can be true.
struct NegatedCnf
{
    Cnf defs;
    std::vector< Lit > selectors;
    Var next_free = 0;
};

NegatedCnf negate_cnf( const Cnf& f, Var first_free );

} // namespace pogen
