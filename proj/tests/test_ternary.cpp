#include "support.hpp"

#include "pogen/ternary.hpp"

#include <doctest.h>

#include <algorithm>

using namespace pogen;
using namespace pogen::test;

namespace
{

// Every binary completion of a ternary vector.
std::vector< Bits > completions( const std::vector< Ternary >& t )
{
    auto out = std::vector< Bits >{ Bits{} };
    for ( const auto v : t )
    {
        auto grown = std::vector< Bits >{};
        for ( const auto& prefix : out )
        {
            for ( const bool b : { false, true } )
            {
                if ( v != Ternary::x && ternary_of( b ) != v )
                    continue;
                auto c = prefix;
                c.push_back( b );
                grown.push_back( std::move( c ) );
            }
        }
        out = std::move( grown );
    }
    return out;
}

bool lit_value( const std::vector< bool >& values, AigLit l )
{
    return values[ l.var() ] != l.negated();
}

std::vector< Ternary > random_ternary( Rng& rng, std::size_t n )
{
    auto pick = std::uniform_int_distribution< int >( 0, 2 );
    auto out = std::vector< Ternary >{};
    for ( std::size_t k = 0; k < n; ++k )
        out.push_back( static_cast< Ternary >( pick( rng ) ) );
    return out;
}

} // namespace

TEST_CASE( "ternary operators" )
{
    CHECK( ternary_and( Ternary::zero, Ternary::x ) == Ternary::zero );
    CHECK( ternary_and( Ternary::one, Ternary::x ) == Ternary::x );
    CHECK( ternary_and( Ternary::one, Ternary::one ) == Ternary::one );
    CHECK( ternary_not( Ternary::x ) == Ternary::x );
    CHECK( ternary_not( Ternary::zero ) == Ternary::one );
}

TEST_CASE( "a and not a stays X" )
{
    auto c = Circuit{};
    c.inputs.push_back( ++c.max_var );
    const auto a = AigLit::make( 1, false );
    c.latches.push_back( { ++c.max_var, c.add_and( a, !a ), false } );

    const auto state = std::vector< Ternary >{ Ternary::zero };
    const auto input = std::vector< Ternary >{ Ternary::x };
    CHECK( simulate( c, state, input ).next[ 0 ] == Ternary::x );
}

TEST_CASE( "binary simulation matches evaluation, X is conservative" )
{
    auto rng = Rng{ 21 };

    for ( int round = 0; round < 300; ++round )
    {
        const auto c = random_circuit( rng, 4, 2, 10, 2 );
        const auto state = random_ternary( rng, c.latches.size() );
        const auto input = random_ternary( rng, c.inputs.size() );
        const auto step = simulate( c, state, input );

        for ( const auto& s : completions( state ) )
        {
            for ( const auto& i : completions( input ) )
            {
                auto values = std::vector< bool >{};
                const auto next = evaluate( c, s, i, &values );
                for ( std::size_t k = 0; k < next.size(); ++k )
                    if ( step.next[ k ] != Ternary::x )
                        CHECK( ternary_of( next[ k ] ) == step.next[ k ] );
                for ( std::size_t k = 0; k < c.constraints.size(); ++k )
                    if ( step.constraints[ k ] != Ternary::x )
                        CHECK( ternary_of( lit_value( values, c.constraints[ k ] ) ) == step.constraints[ k ] );
            }
        }
    }
}

TEST_CASE( "incremental updates and rollback match full simulation" )
{
    auto rng = Rng{ 22 };

    for ( int round = 0; round < 200; ++round )
    {
        const auto c = random_circuit( rng, 5, 2, 14 );
        auto state = random_ternary( rng, c.latches.size() );
        const auto input = random_ternary( rng, c.inputs.size() );

        auto sim = TernarySimulator{ c };
        sim.assign( state, input );
        const auto before = simulate( c, state, input ).next;

        const auto mark = sim.mark();
        const auto k = std::uniform_int_distribution< std::size_t >( 0, c.latches.size() - 1 )( rng );
        auto changed = state;
        changed[ k ] = Ternary::x;
        sim.set_latch( k, Ternary::x );

        const auto expected = simulate( c, changed, input ).next;
        for ( std::size_t j = 0; j < c.latches.size(); ++j )
            CHECK( sim.next( j ) == expected[ j ] );

        sim.rollback( mark );
        for ( std::size_t j = 0; j < c.latches.size(); ++j )
            CHECK( sim.next( j ) == before[ j ] );
    }
}

TEST_CASE( "X-probing keeps every observed bit for all completions" )
{
    auto rng = Rng{ 23 };
    auto coin = std::bernoulli_distribution( 0.5 );

    for ( int round = 0; round < 300; ++round )
    {
        const auto c = random_circuit( rng, 5, 2, 12, round % 3 == 0 ? 1 : 0 );

        auto state = Bits( c.latches.size() );
        auto input = Bits( c.inputs.size() );
        for ( auto&& b : state )
            b = coin( rng );
        for ( auto&& b : input )
            b = coin( rng );

        auto values = std::vector< bool >{};
        const auto next = evaluate( c, state, input, &values );
        const auto ok = std::all_of( c.constraints.begin(), c.constraints.end(),
                                     [ & ]( AigLit l ) { return lit_value( values, l ); } );
        if ( !ok )
            continue;

        auto observed = std::vector< Observation >{};
        for ( std::size_t k = 0; k < next.size(); ++k )
            if ( coin( rng ) )
                observed.push_back( { k, next[ k ] } );

        auto order = std::vector< std::size_t >{};
        for ( std::size_t k = 0; k < c.latches.size(); ++k )
            order.push_back( k );
        std::shuffle( order.begin(), order.end(), rng );

        const auto removed = ternary_generalize( c, state, input, observed, order );

        auto cube = std::vector< Ternary >{};
        for ( const auto b : state )
            cube.push_back( ternary_of( b ) );
        for ( const auto k : removed )
            cube[ k ] = Ternary::x;

        for ( const auto& s : completions( cube ) )
        {
            auto vals = std::vector< bool >{};
            const auto n = evaluate( c, s, input, &vals );
            for ( const auto& o : observed )
                CHECK( n[ o.latch ] == o.value );
            for ( const auto l : c.constraints )
                CHECK( lit_value( vals, l ) );
        }

        // a removed latch is never probed twice
        auto sorted = removed;
        std::sort( sorted.begin(), sorted.end() );
        CHECK( std::adjacent_find( sorted.begin(), sorted.end() ) == sorted.end() );
    }
}
