#include "support.hpp"

#include "pogen/pdr.hpp"

#include <doctest.h>

#include <algorithm>

using namespace pogen;
using namespace pogen::test;
using namespace pogen::pdr;

namespace
{

using TsPtr = std::shared_ptr< const TransitionSystem >;

TsPtr system_of( const Circuit& c, ConstraintMode mode = ConstraintMode::keep_separate )
{
    return std::make_shared< const TransitionSystem >( circuit_to_ts( c, mode ) );
}

EngineConfig config( const std::string& strategy, bool reversed = false )
{
    auto cfg = EngineConfig{};
    cfg.strategy = parse_strategy( strategy );
    cfg.reverse = reversed;
    cfg.verify_pos = true;
    return cfg;
}

Result expected( const std::optional< int >& depth )
{
    return depth ? Result::unsafe : Result::safe;
}

// 2-bit counter from 0 with bad = 3
Circuit counter()
{
    auto c = Circuit{};
    const auto b0 = ++c.max_var, b1 = ++c.max_var;
    const auto x0 = AigLit::make( b0, false ), x1 = AigLit::make( b1, false );
    c.latches.push_back( { b0, !x0, false } );
    const auto carry = c.add_or( c.add_and( x0, !x1 ), c.add_and( !x0, x1 ) );
    c.latches.push_back( { b1, carry, false } );
    c.bad.push_back( c.add_and( x0, x1 ) );
    return c;
}

const std::vector< std::string > circuit_strategies{ "01x-sim", "lifting", "lifting-ld", "igbg", "s01x", "ms01x",
                                                       "ms01x-igbg", "greedy-cover", "gentr", "ilp-cover",
                                                       "sat-cover", "greedy-qbf", "max-qbf", "s01x:free",
                                                       "ms01x:free", "ilp-cover:free", "sat-cover:free",
                                                       "greedy-qbf:free", "max-qbf:free" };

const std::vector< std::string > reverse_strategies{ "structural", "greedy-cover", "gentr", "ilp-cover", "sat-cover",
                                                       "greedy-qbf", "max-qbf", "max-qbf:free" };

// Random circuit whose initial states are not bad.
Circuit interesting_circuit( Rng& rng, int latches, int gates, int constraints )
{
    for ( ;; )
    {
        auto c = random_circuit( rng, latches, 2, gates, constraints );
        if ( bfs_bad_depth( c ) != 0 )
            return c;
    }
}

} // namespace

TEST_CASE( "inductive property is proved in one frame" )
{
    // a latch stuck at 0, bad = latch
    auto c = Circuit{};
    const auto l = ++c.max_var;
    c.latches.push_back( { l, AigLit::make( l, false ), false } );
    c.bad.push_back( AigLit::make( l, false ) );

    const auto v = check( system_of( c ), config( "lifting" ) );
    CHECK( v.result == Result::safe );
    CHECK( v.stats.frames <= 3 );
    CHECK_FALSE( invariant_problem( *system_of( c ), v.invariant ) );
}

TEST_CASE( "counter reaches 3 after three steps" )
{
    const auto c = counter();
    REQUIRE( bfs_bad_depth( c ) == 3 );

    for ( const auto& name : { "lifting", "ms01x", "max-qbf", "greedy-cover" } )
    {
        CAPTURE( std::string( name ) );
        const auto v = check( system_of( c ), config( name ) );
        REQUIRE( v.result == Result::unsafe );
        CHECK( v.trace.size() == 4 );
        CHECK_FALSE( trace_problem( *system_of( c ), v.trace ) );
    }

    const auto v = check( system_of( c ), config( "max-qbf", true ) );
    REQUIRE( v.result == Result::unsafe );
    CHECK( v.trace.size() == 4 );

    const auto w = aiger_witness( *system_of( c ), check( system_of( c ), config( "lifting" ) ).trace );
    CHECK( w == "1\nb0\n00\n\n\n\n\n.\n" );
}

TEST_CASE( "example circuits" )
{
    const auto a = parse_aiger( fixture( "sys_a.aag" ) );
    REQUIRE( bfs_bad_depth( a ) == 1 );
    const auto va = check( system_of( a ), config( "lifting" ) );
    CHECK( va.result == Result::unsafe );
    CHECK( va.trace.size() == 2 );
    CHECK( aiger_witness( *system_of( a ), va.trace ) == "1\nb0\n00\n1\n0\n.\n" );

    // SYS-C: separate constraint with extended lifting vs the self-loop repair
    const auto c = parse_aiger( fixture( "sys_c.aag" ) );
    const auto oracle = expected( bfs_bad_depth( c ) );
    CHECK( check( system_of( c ), config( "lifting" ) ).result == oracle );
    CHECK( check( system_of( c, ConstraintMode::self_loops ), config( "lifting" ) ).result == oracle );
    CHECK( check( system_of( c, ConstraintMode::dead_end ), config( "lifting" ) ).result == oracle );
}

TEST_CASE( "dimspec plans" )
{
    // the bit may only be kept: the goal is unreachable
    const auto keep = std::make_shared< const TransitionSystem >(
        parse_dimspec( "i cnf 1 1\n1 0\nu cnf 1 0\ng cnf 1 1\n-1 0\nt cnf 2 1\n-1 2 0\n" ) );
    CHECK( check( keep, config( "max-qbf" ) ).result == Result::safe );

    const auto clear = std::make_shared< const TransitionSystem >(
        parse_dimspec( "i cnf 1 1\n1 0\nu cnf 1 0\ng cnf 1 1\n-1 0\nt cnf 2 1\n1 -2 0\n" ) );
    const auto v = check( clear, config( "greedy-qbf" ) );
    REQUIRE( v.result == Result::unsafe );
    CHECK( v.trace.size() == 2 );

    CHECK_THROWS_AS( check( clear, config( "igbg" ) ), inapplicable_strategy );
}

TEST_CASE( "verdicts agree with explicit-state search on random circuits" )
{
    auto rng = Rng{ 41 };

    for ( int round = 0; round < 25; ++round )
    {
        const auto c = interesting_circuit( rng, 2 + round % 5, 8 + round % 7, 0 );
        const auto ts = system_of( c );
        const auto oracle = expected( bfs_bad_depth( c ) );
        CAPTURE( unparse_aiger( c ) );

        for ( const auto& name : circuit_strategies )
        {
            CAPTURE( name );
            const auto v = check( ts, config( name ) );
            CHECK( v.result == oracle );
        }
        for ( const auto& name : reverse_strategies )
        {
            CAPTURE( name );
            const auto v = check( ts, config( name, true ) );
            CHECK( v.result == oracle );
        }
    }
}

TEST_CASE( "constraint handling options agree" )
{
    auto rng = Rng{ 42 };

    for ( int round = 0; round < 25; ++round )
    {
        const auto c = interesting_circuit( rng, 2 + round % 4, 9, 1 );
        const auto oracle = expected( bfs_bad_depth( c ) );
        CAPTURE( unparse_aiger( c ) );

        const auto separate = system_of( c );
        CHECK( check( separate, config( "igbg" ) ).result == oracle );
        CHECK( check( separate, config( "01x-sim" ) ).result == oracle );
        CHECK( check( separate, config( "lifting" ) ).result == oracle );
        CHECK( check( system_of( c, ConstraintMode::self_loops ), config( "lifting" ) ).result == oracle );
        CHECK( check( system_of( c, ConstraintMode::dead_end ), config( "lifting" ) ).result == oracle );
        CHECK( check( system_of( c, ConstraintMode::self_loops ), config( "structural", true ) ).result == oracle );
    }
}

TEST_CASE( "relational systems" )
{
    auto rng = Rng{ 43 };

    for ( int round = 0; round < 40; ++round )
    {
        auto ts = TransitionSystem{};
        ts.state = { 1, 2, 3 };
        ts.input = { 4 };
        ts.next = { 5, 6, 7 };
        ts.trans = random_cnf( rng, 7, 5 + round % 4, 3 );
        ts.init = random_cnf( rng, 3, 2, 2 );
        ts.bad = random_cnf( rng, 3, 2, 2 );
        ts.index_vars();
        const auto shared = std::make_shared< const TransitionSystem >( ts );
        const auto oracle = expected( bfs_bad_depth( ts ) );

        for ( const auto* name : { "greedy-cover", "gentr", "ilp-cover", "sat-cover", "greedy-qbf", "max-qbf",
                                   "max-qbf:free", "ilp-cover:free", "greedy-qbf:free" } )
        {
            CAPTURE( std::string( name ) );
            CHECK( check( shared, config( name ) ).result == oracle );
            CHECK( check( shared, config( name, true ) ).result == oracle );
        }
    }
}

TEST_CASE( "extraction hook emits valid instances" )
{
    auto emitted = std::vector< std::string >{};
    auto cfg = config( "lifting" );
    cfg.on_pogp = [ & ]( const PogpInstance& p ) {
        CHECK( pogp_problems( p ).empty() );
        emitted.push_back( serialize( p ) );
    };
    check( system_of( counter() ), cfg );

    CHECK( emitted.size() >= 1 );
    for ( const auto& text : emitted )
        CHECK( serialize( parse_pogp( text ) ) == text );
}

TEST_CASE( "unsound generalization raises the alarm" )
{
    // from 00 the counter needs three steps; claiming every state reaches
    // the obligation in one step puts an initial state in a PO too early
    auto cfg = EngineConfig{};
    cfg.custom_generalizer = []( const PogpInstance& ) { return Cube{}; };
    CHECK_THROWS_AS( check( system_of( counter() ), cfg ), soundness_alarm );

    // with verification every generalized PO is checked right away
    auto sys_c = parse_aiger( fixture( "sys_c.aag" ) );
    auto lifting = config( "lifting" );
    lifting.gen.lifting = LiftingCall::plain;
    lifting.gen.unsafe = true;
    const auto v = check( system_of( sys_c ), lifting );
    CHECK( v.result == expected( bfs_bad_depth( sys_c ) ) );
}

TEST_CASE( "portfolio and limits" )
{
    const auto ts = system_of( counter() );
    const auto single = check( ts, config( "ms01x" ) ).result;
    const auto both = portfolio( ts, { config( "ms01x" ), config( "igbg" ) } );
    CHECK( both.result == single );
    CHECK( ( both.strategy == "ms01x" || both.strategy == "igbg" ) );

    auto limited = config( "lifting" );
    limited.limits.frames = 1;
    const auto v = check( ts, limited );
    CHECK( v.result == Result::unknown );
    CHECK( v.reason == "frame limit" );

    auto cancelled = config( "lifting" );
    cancelled.cancel = std::make_shared< std::atomic< bool > >( true );
    CHECK( check( ts, cancelled ).result == Result::unknown );

    // plain lifting without left-totality is refused up front
    auto plain = config( "lifting" );
    plain.gen.lifting = LiftingCall::plain;
    CHECK_THROWS_AS( check( system_of( parse_aiger( fixture( "sys_c.aag" ) ) ), plain ), inapplicable_strategy );
}

TEST_CASE( "certificate checks reject broken certificates" )
{
    const auto ts = system_of( counter() );
    CHECK( invariant_problem( *ts, {} ) ); // the empty invariant contains bad states
    CHECK( trace_problem( *ts, {} ) );

    const auto v = check( ts, config( "lifting" ) );
    auto broken = v.trace;
    std::swap( broken[ 0 ], broken[ 1 ] );
    CHECK( trace_problem( *ts, broken ) );
}
