#include "support.hpp"

#include "pogen/circuit.hpp"
#include "pogen/transition_system.hpp"

#include <doctest.h>

#include <map>

using namespace pogen;
using namespace pogen::test;

TEST_CASE( "constant-false output" )
{
    const auto c = parse_aiger( "aag 0 0 0 1 0\n0\n" );
    CHECK( c.latches.empty() );
    REQUIRE( c.bad_literals().size() == 1 );
    CHECK( c.bad_literals()[ 0 ] == AigLit::constant( false ) );
}

TEST_CASE( "pass-through output" )
{
    const auto c = parse_aiger( "aag 1 1 0 1 0\n2\n2\n" );
    CHECK( c.inputs.size() == 1 );
    REQUIRE( c.bad_literals().size() == 1 );
    CHECK( c.bad_literals()[ 0 ] == AigLit::make( c.inputs[ 0 ], false ) );
}

TEST_CASE( "SYS-A shape and next-state functions" )
{
    const auto c = parse_aiger( fixture( "sys_a.aag" ) );
    CHECK( c.latches.size() == 2 );
    CHECK( c.inputs.size() == 1 );
    CHECK( c.gates.size() == 2 );

    for ( std::uint64_t a = 0; a < 8; ++a )
    {
        const bool s1 = a & 1, s2 = a & 2, i1 = a & 4;
        const auto next = evaluate( c, { s1, s2 }, { i1 } );
        CHECK( next[ 0 ] == ( ( s1 && s2 ) || i1 ) );
        CHECK( next[ 1 ] == false );
    }
}

TEST_CASE( "parse errors carry line numbers" )
{
    SUBCASE( "binary format" )
    {
        CHECK_THROWS_AS( parse_aiger( "aig 0 0 0 0 0\n" ), unsupported_format );
    }
    SUBCASE( "malformed header" )
    {
        CHECK_THROWS_AS( parse_aiger( "aag 1 2\n" ), parse_error );
    }
    SUBCASE( "id exceeds M" )
    {
        try
        {
            parse_aiger( "aag 1 1 0 1 0\n2\n6\n" );
            FAIL( "expected parse error" );
        }
        catch ( const parse_error& e )
        {
            CHECK( e.line() == 3 );
        }
    }
    SUBCASE( "non-topological gate" )
    {
        try
        {
            parse_aiger( "aag 3 1 0 1 2\n2\n6\n6 4 2\n4 2 2\n" );
            FAIL( "expected parse error" );
        }
        catch ( const parse_error& e )
        {
            CHECK( e.line() == 5 );
        }
    }
    SUBCASE( "uninitialized latch" )
    {
        CHECK_THROWS_AS( parse_aiger( "aag 1 0 1 0 0\n2 2 2\n" ), parse_error );
    }
    SUBCASE( "justice properties" )
    {
        CHECK_THROWS_AS( parse_aiger( "aag 1 1 0 0 0 0 0 1 0\n2\n1\n2\n" ), parse_error );
    }
    SUBCASE( "truncated" )
    {
        CHECK_THROWS_AS( parse_aiger( "aag 1 1 0 1 0\n2\n" ), parse_error );
    }
}

TEST_CASE( "unparse round-trips" )
{
    auto rng = Rng{ 3 };
    for ( int round = 0; round < 100; ++round )
    {
        const auto c = random_circuit( rng, 1 + round % 5, round % 4, round % 9, round % 3 );
        const auto text = unparse_aiger( c );
        const auto again = parse_aiger( text );
        CHECK( again == c );
        CHECK( unparse_aiger( again ) == text );
    }

    const auto a = parse_aiger( fixture( "sys_a.aag" ) );
    CHECK( parse_aiger( unparse_aiger( a ) ) == a );
}

TEST_CASE( "constraint-free circuits are functions" )
{
    const auto c = parse_aiger( fixture( "sys_a.aag" ) );
    for ( const auto mode : { ConstraintMode::reject, ConstraintMode::self_loops, ConstraintMode::dead_end,
                              ConstraintMode::keep_separate } )
    {
        const auto ts = circuit_to_ts( c, mode );
        CHECK( ts.caps.right_unique == Tri::yes );
        CHECK( ts.caps.left_total == Tri::yes );
        CHECK( ts.origin == Origin::circuit );
        CHECK_FALSE( ts.has_constraint() );
    }
}

TEST_CASE( "reject mode refuses constrained circuits" )
{
    const auto c = parse_aiger( fixture( "sys_c.aag" ) );
    CHECK_THROWS_AS( circuit_to_ts( c, ConstraintMode::reject ), constrained_system_error );

    const auto ts = circuit_to_ts( c, ConstraintMode::keep_separate );
    CHECK( ts.caps.right_unique == Tri::yes );
    CHECK( ts.caps.left_total == Tri::no );
    CHECK( ts.origin == Origin::circuit_constraint );
    CHECK( ts.has_constraint() );
}

namespace
{

// (i1 ∧ s1) violates the SYS-C constraint
bool sys_c_admissible( bool s1, bool i1 )
{
    return !( i1 && s1 );
}

} // namespace

TEST_CASE( "SYS-C with self-loops stays put on violating steps" )
{
    const auto ts = circuit_to_ts( parse_aiger( fixture( "sys_c.aag" ) ), ConstraintMode::self_loops );
    REQUIRE( ts.state.size() == 1 );
    const auto transitions = enumerate_transitions( ts );

    CHECK( transitions.size() == 4 );
    for ( const auto& [ s, i, n ] : transitions )
    {
        if ( sys_c_admissible( s[ 0 ], i[ 0 ] ) )
            CHECK( n[ 0 ] == i[ 0 ] );
        else
            CHECK( n[ 0 ] == s[ 0 ] );
    }
}

TEST_CASE( "SYS-C with a dead end routes violating steps to the dead state" )
{
    const auto ts = circuit_to_ts( parse_aiger( fixture( "sys_c.aag" ) ), ConstraintMode::dead_end );
    REQUIRE( ts.state.size() == 2 );
    const auto transitions = enumerate_transitions( ts );

    CHECK( transitions.size() == 8 );
    const auto dead = Bits{ false, true };
    for ( const auto& [ s, i, n ] : transitions )
    {
        if ( s[ 1 ] || !sys_c_admissible( s[ 0 ], i[ 0 ] ) )
            CHECK( n == dead );
        else
            CHECK( n == Bits{ i[ 0 ], false } );
    }
}

TEST_CASE( "repairs yield left-total right-unique relations with the same reachable states" )
{
    auto rng = Rng{ 5 };

    for ( int round = 0; round < 30; ++round )
    {
        const auto latches = 1 + static_cast< int >( rng() % 3 );
        const auto inputs = 1 + static_cast< int >( rng() % 2 );
        const auto c = random_circuit( rng, latches, inputs, 4, 1 );

        for ( const auto mode : { ConstraintMode::self_loops, ConstraintMode::dead_end } )
        {
            const auto ts = circuit_to_ts( c, mode );
            const auto transitions = enumerate_transitions( ts );
            const auto width = ts.state.size() + ts.input.size();

            // exactly one successor per (state, input)
            auto seen = std::map< std::pair< Bits, Bits >, int >{};
            for ( const auto& [ s, i, n ] : transitions )
                ++seen[ { s, i } ];
            CHECK( seen.size() == ( std::size_t{ 1 } << width ) );
            for ( const auto& [ key, count ] : seen )
                CHECK( count == 1 );
        }

        const auto looped = repair_self_loops( c );
        CHECK( reachable_states( looped ) == reachable_states( c ) );
        CHECK( bfs_bad_depth( looped ).has_value() == bfs_bad_depth( c ).has_value() );
        CHECK( bfs_bad_depth( repair_dead_end( c ) ).has_value() == bfs_bad_depth( c ).has_value() );
    }
}

TEST_CASE( "dimspec with empty sections" )
{
    const auto ts = parse_dimspec( "i cnf 1 0\nu cnf 1 0\ng cnf 1 0\nt cnf 2 0\n" );
    CHECK( ts.state.size() == 1 );
    CHECK( ts.input.empty() );
    CHECK( ts.trans.empty() );
    CHECK( enumerate_transitions( ts ).size() == 4 );
    CHECK( ts.caps == Caps{} );
    CHECK( ts.origin == Origin::dimspec );
}

TEST_CASE( "dimspec universal clauses constrain both sides of a step" )
{
    const auto ts = parse_dimspec( "i cnf 1 0\nu cnf 1 1\n1 0\ng cnf 1 0\nt cnf 2 0\n" );
    const auto transitions = enumerate_transitions( ts );
    REQUIRE( transitions.size() == 1 );
    const auto& [ s, i, n ] = *transitions.begin();
    CHECK( s[ 0 ] );
    CHECK( n[ 0 ] );
    CHECK_FALSE( holds_on_state( ts, ts.init, { false } ) );
}

TEST_CASE( "dimspec plans" )
{
    // s → s′: a set bit can never be cleared, so the goal is unreachable
    const auto keep = parse_dimspec( "i cnf 1 1\n1 0\nu cnf 1 0\ng cnf 1 1\n-1 0\nt cnf 2 1\n-1 2 0\n" );
    CHECK_FALSE( bfs_bad_depth( keep ).has_value() );

    // s′ → s: the bit may be cleared but never set; one step reaches the goal
    const auto clear = parse_dimspec( "i cnf 1 1\n1 0\nu cnf 1 0\ng cnf 1 1\n-1 0\nt cnf 2 1\n1 -2 0\n" );
    CHECK( bfs_bad_depth( clear ) == 1 );
}

TEST_CASE( "dimspec errors" )
{
    CHECK_THROWS_AS( parse_dimspec( "i cnf 1 0\nu cnf 1 0\ng cnf 1 0\n" ), parse_error );
    CHECK_THROWS_AS( parse_dimspec( "i cnf 1 1\n2 0\nu cnf 1 0\ng cnf 1 0\nt cnf 2 0\n" ), parse_error );
    CHECK_THROWS_AS( parse_dimspec( "i cnf 1 0\nu cnf 1 0\ng cnf 1 0\nt cnf 2 1\n3 0\n" ), parse_error );
    CHECK_THROWS_AS( parse_dimspec( "i cnf 1 0\nu cnf 2 0\ng cnf 1 0\nt cnf 2 0\n" ), parse_error );
}

TEST_CASE( "reverse is an involution" )
{
    auto rng = Rng{ 9 };
    for ( int round = 0; round < 20; ++round )
    {
        const auto ts = circuit_to_ts( random_circuit( rng, 2, 1, 3 ), ConstraintMode::reject );
        const auto back = reverse( reverse( ts ) );
        CHECK( back.trans == ts.trans );
        CHECK( back.init == ts.init );
        CHECK( back.bad == ts.bad );
        CHECK( back.caps == ts.caps );
        CHECK( back.origin == ts.origin );
    }
}

TEST_CASE( "reversed circuits are left-unique" )
{
    const auto ts = circuit_to_ts( parse_aiger( fixture( "sys_a.aag" ) ), ConstraintMode::reject );
    const auto r = reverse( ts );
    CHECK( r.caps.left_unique == Tri::yes );
    CHECK( r.caps.right_total == Tri::yes );
    CHECK( r.caps.right_unique == Tri::unknown );
    CHECK( r.caps.left_total == Tri::unknown );
    CHECK( r.origin == Origin::reversed );
    CHECK( r.base_origin == Origin::circuit );
}

TEST_CASE( "reverse preserves the relation with swapped endpoints" )
{
    auto rng = Rng{ 13 };
    for ( int round = 0; round < 20; ++round )
    {
        const auto ts = circuit_to_ts( random_circuit( rng, 2, 1, 4 ), ConstraintMode::reject );
        auto expected = std::set< Transition >{};
        for ( const auto& [ s, i, n ] : enumerate_transitions( ts ) )
            expected.emplace( n, i, s );
        CHECK( enumerate_transitions( reverse( ts ) ) == expected );
    }
}

TEST_CASE( "reversing a one-latch AND circuit gives the left-unique AND relation" )
{
    // s1′ = i1 ∧ s1 reversed: s1 = i1 ∧ s1′ as clauses over (s1, i1, s1′)
    const auto c = parse_aiger( "aag 3 1 1 0 1\n2\n4 6\n6 2 4\n" );
    const auto r = reverse( circuit_to_ts( c, ConstraintMode::reject ) );

    auto expected = std::set< Transition >{};
    for ( int a = 0; a < 4; ++a )
    {
        const bool i1 = a & 1, n1 = a & 2;
        expected.emplace( Bits{ i1 && n1 }, Bits{ i1 }, Bits{ n1 } );
    }
    CHECK( enumerate_transitions( r ) == expected );
}

TEST_CASE( "reverse refuses separate constraints" )
{
    const auto ts = circuit_to_ts( parse_aiger( fixture( "sys_c.aag" ) ), ConstraintMode::keep_separate );
    CHECK_THROWS_AS( reverse( ts ), constrained_system_error );
}

TEST_CASE( "bad states of a circuit honor constraints" )
{
    // SYS-C: bad = s1, but only where some input satisfies ¬(i1 ∧ s1): i1 = 0 works
    const auto ts = circuit_to_ts( parse_aiger( fixture( "sys_c.aag" ) ), ConstraintMode::keep_separate );
    CHECK( holds_on_state( ts, ts.bad, { true } ) );
    CHECK_FALSE( holds_on_state( ts, ts.bad, { false } ) );
    CHECK( ts.init_cube() == Cube{ Lit::neg( ts.state[ 0 ] ) } );
}
