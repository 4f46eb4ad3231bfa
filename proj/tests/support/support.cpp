#include "support.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#ifndef POGEN_SOURCE_DIR
#define POGEN_SOURCE_DIR "."
#endif

namespace pogen::test
{

std::string fixture( const std::string& name )
{
    const auto path = std::string( POGEN_SOURCE_DIR ) + "/fixtures/" + name;
    auto in = std::ifstream( path );
    if ( !in )
        throw std::runtime_error( "cannot open fixture " + path );
    auto ss = std::stringstream{};
    ss << in.rdbuf();
    return ss.str();
}

Bits bits_of( std::uint64_t value, std::size_t width )
{
    auto out = Bits( width );
    for ( std::size_t k = 0; k < width; ++k )
        out[ k ] = ( value >> k ) & 1;
    return out;
}

Cnf random_cnf( Rng& rng, int vars, int clauses, int max_width )
{
    auto f = Cnf{ vars };
    auto var = std::uniform_int_distribution< int >( 1, vars );
    auto width = std::uniform_int_distribution< int >( 1, max_width );
    auto coin = std::bernoulli_distribution( 0.5 );

    for ( int k = 0; k < clauses; ++k )
    {
        auto lits = std::vector< Lit >{};
        const auto w = width( rng );
        for ( int j = 0; j < w; ++j )
            lits.emplace_back( var( rng ), coin( rng ) );
        f.add( std::move( lits ) );
    }

    return f;
}

std::vector< Assignment > all_models( const Cnf& f, int vars )
{
    auto out = std::vector< Assignment >{};

    for ( std::uint64_t a = 0; a < ( std::uint64_t{ 1 } << vars ); ++a )
    {
        auto values = Assignment( static_cast< std::size_t >( vars ) + 1 );
        for ( int v = 1; v <= vars; ++v )
            values[ v ] = ( a >> ( v - 1 ) ) & 1;

        if ( f.eval( values ) )
            out.push_back( std::move( values ) );
    }

    return out;
}

bool brute_sat( const Cnf& f, int vars )
{
    for ( std::uint64_t a = 0; a < ( std::uint64_t{ 1 } << vars ); ++a )
    {
        auto values = Assignment( static_cast< std::size_t >( vars ) + 1 );
        for ( int v = 1; v <= vars; ++v )
            values[ v ] = ( a >> ( v - 1 ) ) & 1;

        if ( f.eval( values ) )
            return true;
    }

    return false;
}

Circuit random_circuit( Rng& rng, int latches, int inputs, int gates, int constraints, bool random_init )
{
    auto c = Circuit{};
    auto coin = std::bernoulli_distribution( 0.5 );

    for ( int k = 0; k < inputs; ++k )
        c.inputs.push_back( ++c.max_var );

    for ( int k = 0; k < latches; ++k )
        c.latches.push_back( { ++c.max_var, AigLit{}, random_init && coin( rng ) } );

    const auto pick = [ & ]() {
        auto var = std::uniform_int_distribution< std::uint32_t >( 1, c.max_var );
        return AigLit::make( var( rng ), coin( rng ) );
    };

    for ( int k = 0; k < gates; ++k )
    {
        const auto a = pick();
        const auto b = pick();
        c.add_and( a, b );
    }

    for ( auto& l : c.latches )
        l.next = pick();

    c.bad.push_back( pick() );

    for ( int k = 0; k < constraints; ++k )
        c.constraints.push_back( pick() );

    return c;
}

namespace
{

struct Evaluation
{
    std::vector< bool > values;
    Bits next;
};

Evaluation eval_step( const Circuit& c, const Bits& state, const Bits& input )
{
    auto e = Evaluation{};
    e.next = evaluate( c, state, input, &e.values );
    return e;
}

bool lit_value( const std::vector< bool >& values, AigLit l )
{
    return values[ l.var() ] != l.negated();
}

} // namespace

std::vector< CircuitStep > circuit_steps( const Circuit& c, const Bits& state )
{
    auto out = std::vector< CircuitStep >{};
    const auto inputs = c.inputs.size();

    for ( std::uint64_t a = 0; a < ( std::uint64_t{ 1 } << inputs ); ++a )
    {
        const auto input = bits_of( a, inputs );
        const auto e = eval_step( c, state, input );

        const auto ok = std::all_of( c.constraints.begin(), c.constraints.end(), [ & ]( AigLit l ) {
            return lit_value( e.values, l );
        } );

        if ( !ok )
            continue;

        const auto& bads = c.bad_literals();
        const auto bad = std::any_of( bads.begin(), bads.end(), [ & ]( AigLit l ) { return lit_value( e.values, l ); } );
        out.push_back( { input, e.next, bad } );
    }

    return out;
}

std::optional< int > bfs_bad_depth( const Circuit& c )
{
    auto init = Bits( c.latches.size() );
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        init[ k ] = c.latches[ k ].init;

    auto depth = std::map< Bits, int >{ { init, 0 } };
    auto queue = std::deque< Bits >{ init };

    while ( !queue.empty() )
    {
        const auto s = queue.front();
        queue.pop_front();
        const auto d = depth[ s ];

        for ( const auto& step : circuit_steps( c, s ) )
        {
            if ( step.bad )
                return d;

            if ( !depth.contains( step.next ) )
            {
                depth[ step.next ] = d + 1;
                queue.push_back( step.next );
            }
        }
    }

    return std::nullopt;
}

std::set< Bits > reachable_states( const Circuit& c )
{
    auto init = Bits( c.latches.size() );
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        init[ k ] = c.latches[ k ].init;

    auto seen = std::set< Bits >{ init };
    auto queue = std::deque< Bits >{ init };

    while ( !queue.empty() )
    {
        const auto s = queue.front();
        queue.pop_front();

        for ( const auto& step : circuit_steps( c, s ) )
            if ( seen.insert( step.next ).second )
                queue.push_back( step.next );
    }

    return seen;
}

namespace
{

// Backtracking model enumeration with clause checks as soon as a clause's
// largest variable is assigned.
void enumerate_models( const Cnf& f, Var vars, const std::function< void( const Assignment& ) >& visit )
{
    auto by_max = std::vector< std::vector< const Clause* > >( static_cast< std::size_t >( vars ) + 1 );
    auto trivially_false = false;

    for ( const auto& c : f.clauses() )
    {
        if ( c.empty() )
            trivially_false = true;
        else
            by_max[ c.max_var() ].push_back( &c );
    }

    if ( trivially_false )
        return;

    auto values = Assignment( static_cast< std::size_t >( vars ) + 1 );

    std::function< void( Var ) > rec = [ & ]( Var v ) {
        if ( v > vars )
        {
            visit( values );
            return;
        }

        for ( const bool b : { false, true } )
        {
            values[ v ] = b;
            const auto ok = std::all_of( by_max[ v ].begin(), by_max[ v ].end(), [ & ]( const Clause* c ) {
                return eval( *c, values );
            } );
            if ( ok )
                rec( v + 1 );
        }
    };

    rec( 1 );
}

Bits project( const Assignment& values, const std::vector< Var >& vars )
{
    auto out = Bits( vars.size() );
    for ( std::size_t k = 0; k < vars.size(); ++k )
        out[ k ] = values[ vars[ k ] ];
    return out;
}

std::set< Bits > state_set( const TransitionSystem& ts, const Cnf& f )
{
    auto out = std::set< Bits >{};
    enumerate_models( f, std::max( f.num_vars(), ts.state.empty() ? 0 : *std::max_element( ts.state.begin(), ts.state.end() ) ),
                      [ & ]( const Assignment& a ) { out.insert( project( a, ts.state ) ); } );
    return out;
}

} // namespace

std::set< Transition > enumerate_transitions( const TransitionSystem& ts )
{
    auto out = std::set< Transition >{};
    const auto t = ts.full_trans();
    auto vars = t.num_vars();
    for ( const auto* list : { &ts.state, &ts.input, &ts.next } )
        for ( const auto v : *list )
            vars = std::max( vars, v );

    enumerate_models( t, vars, [ & ]( const Assignment& a ) {
        out.emplace( project( a, ts.state ), project( a, ts.input ), project( a, ts.next ) );
    } );

    return out;
}

bool holds_on_state( const TransitionSystem& ts, const Cnf& f, const Bits& state )
{
    auto fixed = f;
    for ( std::size_t k = 0; k < ts.state.size(); ++k )
        fixed.add( { Lit{ ts.state[ k ], !state[ k ] } } );

    // variables outside every clause are free; no need to branch on them
    auto vars = Var{ 0 };
    for ( const auto& c : fixed.clauses() )
        if ( !c.empty() )
            vars = std::max( vars, c.max_var() );
    auto found = false;
    enumerate_models( fixed, vars, [ & ]( const Assignment& ) { found = true; } );
    return found;
}

std::optional< int > bfs_bad_depth( const TransitionSystem& ts )
{
    const auto init = state_set( ts, ts.init );
    const auto bad = state_set( ts, ts.bad );

    auto succ = std::map< Bits, std::vector< Bits > >{};
    for ( const auto& [ s, i, n ] : enumerate_transitions( ts ) )
        succ[ s ].push_back( n );

    auto depth = std::map< Bits, int >{};
    auto queue = std::deque< Bits >{};
    for ( const auto& s : init )
    {
        depth[ s ] = 0;
        queue.push_back( s );
    }

    while ( !queue.empty() )
    {
        const auto s = queue.front();
        queue.pop_front();

        if ( bad.contains( s ) )
            return depth[ s ];

        for ( const auto& n : succ[ s ] )
        {
            if ( !depth.contains( n ) )
            {
                depth[ n ] = depth[ s ] + 1;
                queue.push_back( n );
            }
        }
    }

    return std::nullopt;
}

bool qbf_holds_for( const Cnf& f, int vars, const std::vector< Var >& outer, const std::vector< Var >& universal,
                    const Assignment& fixed )
{
    auto is_outer = std::vector< char >( vars + 1, 0 );
    auto is_univ = std::vector< char >( vars + 1, 0 );
    for ( const auto v : outer )
        is_outer[ v ] = 1;
    for ( const auto v : universal )
        is_univ[ v ] = 1;

    auto rest = std::vector< Var >{};
    for ( int v = 1; v <= vars; ++v )
        if ( !is_outer[ v ] && !is_univ[ v ] )
            rest.push_back( v );

    for ( std::uint64_t y = 0; y < ( std::uint64_t{ 1 } << universal.size() ); ++y )
    {
        auto found = false;
        for ( std::uint64_t z = 0; z < ( std::uint64_t{ 1 } << rest.size() ) && !found; ++z )
        {
            auto a = fixed;
            a.resize( vars + 1 );
            for ( std::size_t k = 0; k < universal.size(); ++k )
                a[ universal[ k ] ] = ( y >> k ) & 1;
            for ( std::size_t k = 0; k < rest.size(); ++k )
                a[ rest[ k ] ] = ( z >> k ) & 1;
            found = f.eval( a );
        }
        if ( !found )
            return false;
    }
    return true;
}

std::vector< Assignment > valid_outer( const Cnf& f, int vars, const std::vector< Var >& outer,
                                       const std::vector< Var >& universal )
{
    auto out = std::vector< Assignment >{};
    for ( std::uint64_t x = 0; x < ( std::uint64_t{ 1 } << outer.size() ); ++x )
    {
        auto a = Assignment( vars + 1 );
        for ( std::size_t k = 0; k < outer.size(); ++k )
            a[ outer[ k ] ] = ( x >> k ) & 1;
        if ( qbf_holds_for( f, vars, outer, universal, a ) )
            out.push_back( a );
    }
    return out;
}

} // namespace pogen::test
