#include "pogen/ternary.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace pogen
{

char to_char( Ternary t )
{
    switch ( t )
    {
    case Ternary::zero: return '0';
    case Ternary::one: return '1';
    case Ternary::x: return 'X';
    }
    return '?';
}

TernarySimulator::TernarySimulator( const Circuit& c )
    : _circuit{ &c },
      _values( c.max_var + 1, Ternary::zero ),
      _fanout( c.max_var + 1 ),
      _queued( c.gates.size(), 0 )
{
    for ( std::size_t g = 0; g < c.gates.size(); ++g )
    {
        const auto& gate = c.gates[ g ];
        _fanout[ gate.in0.var() ].push_back( static_cast< std::uint32_t >( g ) );
        if ( gate.in1.var() != gate.in0.var() )
            _fanout[ gate.in1.var() ].push_back( static_cast< std::uint32_t >( g ) );
    }
}

void TernarySimulator::assign( std::span< const Ternary > state, std::span< const Ternary > input )
{
    const auto& c = *_circuit;
    if ( state.size() != c.latches.size() || input.size() != c.inputs.size() )
        throw std::invalid_argument( "ternary assignment has the wrong width" );

    _log.clear();
    for ( std::size_t k = 0; k < c.inputs.size(); ++k )
        _values[ c.inputs[ k ] ] = input[ k ];
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        _values[ c.latches[ k ].var ] = state[ k ];
    for ( const auto& g : c.gates )
        _values[ g.out ] = ternary_and( value( g.in0 ), value( g.in1 ) );
}

Ternary TernarySimulator::value( AigLit l ) const
{
    const auto v = l.is_constant() ? Ternary::zero : _values[ l.var() ];
    return l.negated() ? ternary_not( v ) : v;
}

void TernarySimulator::set_latch( std::size_t k, Ternary v )
{
    set_var( _circuit->latches[ k ].var, v );
    propagate();
}

void TernarySimulator::set_input( std::size_t k, Ternary v )
{
    set_var( _circuit->inputs[ k ], v );
    propagate();
}

void TernarySimulator::set_var( std::uint32_t var, Ternary v )
{
    if ( _values[ var ] == v )
        return;

    _log.emplace_back( var, _values[ var ] );
    _values[ var ] = v;

    for ( const auto g : _fanout[ var ] )
    {
        if ( !_queued[ g ] )
        {
            _queued[ g ] = 1;
            _pending.push_back( g );
            std::push_heap( _pending.begin(), _pending.end(), std::greater<>{} );
        }
    }
}

// Gates are topologically ordered, so draining by gate index visits each
// affected gate once after all of its fanins.
void TernarySimulator::propagate()
{
    while ( !_pending.empty() )
    {
        std::pop_heap( _pending.begin(), _pending.end(), std::greater<>{} );
        const auto g = _pending.back();
        _pending.pop_back();
        _queued[ g ] = 0;

        const auto& gate = _circuit->gates[ g ];
        set_var( gate.out, ternary_and( value( gate.in0 ), value( gate.in1 ) ) );
    }
}

void TernarySimulator::rollback( std::size_t mark )
{
    while ( _log.size() > mark )
    {
        const auto [ var, old ] = _log.back();
        _log.pop_back();
        _values[ var ] = old;
    }
}

TernaryStep simulate( const Circuit& c, std::span< const Ternary > state, std::span< const Ternary > input )
{
    auto sim = TernarySimulator{ c };
    sim.assign( state, input );

    auto out = TernaryStep{};
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        out.next.push_back( sim.next( k ) );
    for ( std::size_t k = 0; k < c.constraints.size(); ++k )
        out.constraints.push_back( sim.constraint( k ) );
    return out;
}

std::vector< std::size_t > ternary_generalize( const Circuit& c,
                                               const std::vector< bool >& state,
                                               const std::vector< bool >& input,
                                               std::span< const Observation > observed,
                                               std::span< const std::size_t > order )
{
    auto sim = TernarySimulator{ c };
    auto s = std::vector< Ternary >{};
    auto in = std::vector< Ternary >{};
    for ( const auto b : state )
        s.push_back( ternary_of( b ) );
    for ( const auto b : input )
        in.push_back( ternary_of( b ) );
    sim.assign( s, in );

    const auto holds = [ & ]() {
        for ( const auto& o : observed )
            if ( sim.next( o.latch ) != ternary_of( o.value ) )
                return false;
        for ( std::size_t k = 0; k < c.constraints.size(); ++k )
            if ( sim.constraint( k ) != Ternary::one )
                return false;
        return true;
    };

    if ( !holds() )
        throw std::invalid_argument( "observed values do not follow from the binary step" );

    auto removed = std::vector< std::size_t >{};
    auto is_x = std::vector< char >( c.latches.size(), 0 );

    for ( auto progress = true; progress; )
    {
        progress = false;
        for ( const auto k : order )
        {
            if ( is_x[ k ] )
                continue;

            const auto m = sim.mark();
            sim.set_latch( k, Ternary::x );
            if ( holds() )
            {
                is_x[ k ] = 1;
                removed.push_back( k );
                progress = true;
            }
            else
            {
                sim.rollback( m );
            }
        }
    }

    return removed;
}

} // namespace pogen
