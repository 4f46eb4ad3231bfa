#include "pogen/encode.hpp"

#include <algorithm>

namespace pogen
{

namespace
{

bool references_constant( const Circuit& c )
{
    const auto is_const = []( AigLit l ) { return l.is_constant(); };

    return std::any_of( c.latches.begin(), c.latches.end(), [ & ]( const Latch& l ) { return is_const( l.next ); } ) ||
           std::any_of( c.gates.begin(), c.gates.end(), [ & ]( const AndGate& g ) {
               return is_const( g.in0 ) || is_const( g.in1 );
           } ) ||
           std::any_of( c.constraints.begin(), c.constraints.end(), is_const );
}

void add_and( Cnf& cnf, Lit out, Lit a, Lit b )
{
    cnf.add( { ~out, a } );
    cnf.add( { ~out, b } );
    cnf.add( { out, ~a, ~b } );
}

} // namespace

TseitinEncoding tseitin( const Circuit& c )
{
    auto enc = TseitinEncoding{};
    const auto num_latches = static_cast< Var >( c.latches.size() );
    const auto num_inputs = static_cast< Var >( c.inputs.size() );

    enc.node_var.assign( c.max_var + 1, 0 );

    for ( Var k = 0; k < num_latches; ++k )
    {
        enc.state.push_back( k + 1 );
        enc.node_var[ c.latches[ k ].var ] = k + 1;
    }

    for ( Var k = 0; k < num_inputs; ++k )
    {
        enc.input.push_back( num_latches + k + 1 );
        enc.node_var[ c.inputs[ k ] ] = num_latches + k + 1;
    }

    for ( Var k = 0; k < num_latches; ++k )
        enc.next.push_back( num_latches + num_inputs + k + 1 );

    auto next_free = 2 * num_latches + num_inputs + 1;

    for ( const auto& g : c.gates )
        enc.node_var[ g.out ] = next_free++;

    if ( references_constant( c ) )
    {
        enc.const_false = next_free++;
        enc.node_var[ 0 ] = enc.const_false;
        enc.cnf.add( { Lit::neg( enc.const_false ) } );
    }

    for ( const auto& g : c.gates )
        add_and( enc.cnf, Lit::pos( enc.node_var[ g.out ] ), enc.lit( g.in0 ), enc.lit( g.in1 ) );

    for ( Var k = 0; k < num_latches; ++k )
    {
        const auto n = Lit::pos( enc.next[ k ] );
        const auto f = enc.lit( c.latches[ k ].next );
        enc.cnf.add( { ~n, f } );
        enc.cnf.add( { n, ~f } );
    }

    enc.cnf.set_num_vars( std::max( enc.cnf.num_vars(), next_free - 1 ) );
    return enc;
}

TwoRailMap two_rail_encode( const Circuit& c )
{
    auto map = TwoRailMap{};
    map.rails.resize( c.max_var + 1 );

    for ( std::uint32_t v = 0; v <= c.max_var; ++v )
    {
        map.rails[ v ] = { static_cast< Var >( 2 * v + 1 ), static_cast< Var >( 2 * v + 2 ) };
        map.cnf.add( { Lit::neg( map.rails[ v ].zero ), Lit::neg( map.rails[ v ].one ) } );
    }

    // constant 0
    map.cnf.add( { Lit::pos( map.rails[ 0 ].zero ) } );
    map.cnf.add( { Lit::neg( map.rails[ 0 ].one ) } );

    for ( const auto& g : c.gates )
    {
        const auto out = map.rails[ g.out ];
        const auto a = map.rail( g.in0 );
        const auto b = map.rail( g.in1 );

        // out is 1 iff both inputs are 1
        add_and( map.cnf, Lit::pos( out.one ), Lit::pos( a.one ), Lit::pos( b.one ) );

        // out is 0 iff some input is 0
        map.cnf.add( { Lit::neg( out.zero ), Lit::pos( a.zero ), Lit::pos( b.zero ) } );
        map.cnf.add( { Lit::pos( out.zero ), Lit::neg( a.zero ) } );
        map.cnf.add( { Lit::pos( out.zero ), Lit::neg( b.zero ) } );
    }

    map.cnf.set_num_vars( static_cast< Var >( 2 * c.max_var + 2 ) );
    return map;
}

Rail RailSubstitution::rail_of( Var v ) const
{
    for ( const auto& [ var, rail ] : rails )
        if ( var == v )
            return rail;

    return {};
}

Cnf substitute_rails( const Cnf& f, const std::vector< std::pair< Var, Rail > >& rails )
{
    auto lookup = std::vector< Rail >( static_cast< std::size_t >( f.num_vars() ) + 1 );

    for ( const auto& [ v, r ] : rails )
        if ( v <= f.num_vars() )
            lookup[ v ] = r;

    auto out = Cnf{};

    for ( const auto& clause : f.clauses() )
    {
        auto lits = std::vector< Lit >{};

        for ( const auto l : clause )
        {
            const auto r = lookup[ l.var() ];
            if ( r.one == 0 )
                lits.push_back( l );
            else
                lits.push_back( Lit::pos( l.negated() ? r.zero : r.one ) );
        }

        out.add( std::move( lits ) );
    }

    out.set_num_vars( std::max( out.num_vars(), f.num_vars() ) );
    return out;
}

RailSubstitution rail_substitute( const Cnf& f, std::span< const Var > vars, Var first_free )
{
    auto sub = RailSubstitution{};
    sub.next_free = first_free;

    for ( const auto v : vars )
    {
        const auto r = Rail{ sub.next_free, sub.next_free + 1 };
        sub.next_free += 2;
        sub.rails.emplace_back( v, r );
    }

    sub.cnf = substitute_rails( f, sub.rails );

    for ( const auto& [ v, r ] : sub.rails )
        sub.cnf.add( { Lit::neg( r.zero ), Lit::neg( r.one ) } );

    sub.cnf.set_num_vars( std::max( sub.cnf.num_vars(), sub.next_free - 1 ) );
    return sub;
}

NegatedCnf negate_cnf( const Cnf& f, Var first_free )
{
    auto neg = NegatedCnf{};
    neg.next_free = first_free;

    for ( const auto& clause : f.clauses() )
    {
        const auto sel = Lit::pos( neg.next_free++ );
        neg.selectors.push_back( sel );

        for ( const auto l : clause )
            neg.defs.add( { ~sel, ~l } );
    }

    neg.defs.set_num_vars( std::max( neg.defs.num_vars(), neg.next_free - 1 ) );
    return neg;
}

} // namespace pogen
