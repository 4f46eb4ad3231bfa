#pragma once

#include "pogen/circuit.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pogen
{

enum class Ternary : std::uint8_t
{
    zero,
    one,
    x
};

constexpr Ternary ternary_of( bool b )
{
    return b ? Ternary::one : Ternary::zero;
}

constexpr Ternary ternary_not( Ternary a )
{
    return a == Ternary::x ? a : ( a == Ternary::one ? Ternary::zero : Ternary::one );
}

constexpr Ternary ternary_and( Ternary a, Ternary b )
{
    if ( a == Ternary::zero || b == Ternary::zero )
        return Ternary::zero;
    if ( a == Ternary::one && b == Ternary::one )
        return Ternary::one;
    return Ternary::x;
}

char to_char( Ternary t );

// Event-driven 01X simulation of one circuit step. Changes made through
// set_latch()/set_input() can be rolled back to a mark.
class TernarySimulator
{
public:
    explicit TernarySimulator( const Circuit& c );

    void assign( std::span< const Ternary > state, std::span< const Ternary > input );

    std::size_t mark() const { return _log.size(); }
    void rollback( std::size_t mark );

    void set_latch( std::size_t k, Ternary v );
    void set_input( std::size_t k, Ternary v );

    Ternary value( AigLit l ) const;
    Ternary latch( std::size_t k ) const { return _values[ _circuit->latches[ k ].var ]; }
    Ternary next( std::size_t k ) const { return value( _circuit->latches[ k ].next ); }
    Ternary constraint( std::size_t k ) const { return value( _circuit->constraints[ k ] ); }

private:
    void set_var( std::uint32_t var, Ternary v );
    void propagate();

    const Circuit* _circuit;
    std::vector< Ternary > _values;
    std::vector< std::vector< std::uint32_t > > _fanout; // gate indices by var
    std::vector< std::pair< std::uint32_t, Ternary > > _log;
    std::vector< std::uint32_t > _pending;
    std::vector< char > _queued;
};

struct TernaryStep
{
    std::vector< Ternary > next;
    std::vector< Ternary > constraints;
};

TernaryStep simulate( const Circuit& c, std::span< const Ternary > state, std::span< const Ternary > input );

// Greedy X-probing: tries each latch of `order` in turn and keeps it at X if
// every observed next-state bit keeps its value and every constraint stays
// 1. Returns the latches left at X.
struct Observation
{
    std::size_t latch;
    bool value;
};

std::vector< std::size_t > ternary_generalize( const Circuit& c,
                                               const std::vector< bool >& state,
                                               const std::vector< bool >& input,
                                               std::span< const Observation > observed,
                                               std::span< const std::size_t > order );

} // namespace pogen
