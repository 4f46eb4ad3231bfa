#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pogen
{

// AIGER literal: 2v for the positive and 2v+1 for the negated variable v;
// 0 and 1 are the constants.
struct AigLit
{
    std::uint32_t code = 0;

    static constexpr AigLit make( std::uint32_t var, bool negated ) { return { 2 * var + ( negated ? 1u : 0u ) }; }
    static constexpr AigLit constant( bool value ) { return { value ? 1u : 0u }; }

    constexpr std::uint32_t var() const { return code >> 1; }
    constexpr bool negated() const { return ( code & 1 ) != 0; }
    constexpr bool is_constant() const { return var() == 0; }
    constexpr AigLit operator!() const { return { code ^ 1u }; }

    friend constexpr bool operator==( AigLit, AigLit ) = default;
};

struct Latch
{
    std::uint32_t var = 0;
    AigLit next;
    bool init = false;

    friend bool operator==( const Latch&, const Latch& ) = default;
};

struct AndGate
{
    std::uint32_t out = 0;
    AigLit in0;
    AigLit in1;

    friend bool operator==( const AndGate&, const AndGate& ) = default;
};

struct Circuit
{
    std::uint32_t max_var = 0;
    std::vector< std::uint32_t > inputs;
    std::vector< Latch > latches;
    std::vector< AndGate > gates;
    std::vector< AigLit > outputs;
    std::vector< AigLit > bad;
    std::vector< AigLit > constraints;

    // Bad-state literals: the B section if present, otherwise the outputs.
    const std::vector< AigLit >& bad_literals() const { return bad.empty() ? outputs : bad; }

    // Gate index by output var, -1 for non-gates.
    std::vector< int > gate_index() const;

    // Appends a fresh AND gate and returns its positive literal.
    AigLit add_and( AigLit a, AigLit b );
    AigLit add_or( AigLit a, AigLit b ) { return !add_and( !a, !b ); }

    friend bool operator==( const Circuit&, const Circuit& ) = default;
};

class parse_error : public std::runtime_error
{
public:
    parse_error( std::size_t line, const std::string& what )
        : std::runtime_error( "line " + std::to_string( line ) + ": " + what ), _line{ line }
    {}

    std::size_t line() const { return _line; }

private:
    std::size_t _line;
};

class unsupported_format : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Parses ASCII AIGER ("aag"), versions 1.0 and 1.9. Justice and fairness
// sections are rejected, as are uninitialized latches.
Circuit parse_aiger( std::string_view text );
std::string unparse_aiger( const Circuit& c );

// Boolean evaluation of one step; returns next-state values. `node_values`
// receives the value of every var when non-null.
std::vector< bool > evaluate( const Circuit& c,
                              const std::vector< bool >& state,
                              const std::vector< bool >& input,
                              std::vector< bool >* node_values = nullptr );

} // namespace pogen
