#include "pogen/circuit.hpp"

#include <charconv>
#include <optional>
#include <sstream>

namespace pogen
{

std::vector< int > Circuit::gate_index() const
{
    auto index = std::vector< int >( max_var + 1, -1 );

    for ( std::size_t g = 0; g < gates.size(); ++g )
        index[ gates[ g ].out ] = static_cast< int >( g );

    return index;
}

AigLit Circuit::add_and( AigLit a, AigLit b )
{
    ++max_var;
    gates.push_back( { max_var, a, b } );
    return AigLit::make( max_var, false );
}

namespace
{

class line_reader
{
public:
    explicit line_reader( std::string_view text ) : _text{ text } {}

    std::optional< std::string_view > next()
    {
        if ( _pos >= _text.size() )
            return std::nullopt;

        const auto end = _text.find( '\n', _pos );
        const auto stop = end == std::string_view::npos ? _text.size() : end;
        auto line = _text.substr( _pos, stop - _pos );
        _pos = stop + 1;
        ++_line;

        if ( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );

        return line;
    }

    std::size_t line() const { return _line; }

private:
    std::string_view _text;
    std::size_t _pos = 0;
    std::size_t _line = 0;
};

std::vector< std::uint64_t > parse_numbers( std::string_view line, std::size_t lineno )
{
    auto out = std::vector< std::uint64_t >{};
    std::size_t i = 0;

    while ( i < line.size() )
    {
        while ( i < line.size() && line[ i ] == ' ' )
            ++i;

        if ( i >= line.size() )
            break;

        std::uint64_t value = 0;
        const auto* first = line.data() + i;
        const auto* last = line.data() + line.size();
        const auto [ ptr, ec ] = std::from_chars( first, last, value );

        if ( ec != std::errc{} || ( ptr != last && *ptr != ' ' ) )
            throw parse_error( lineno, "expected unsigned integer in '" + std::string( line ) + "'" );

        out.push_back( value );
        i += static_cast< std::size_t >( ptr - first );
    }

    return out;
}

} // namespace

Circuit parse_aiger( std::string_view text )
{
    auto reader = line_reader{ text };
    const auto header = reader.next();

    if ( !header )
        throw parse_error( 1, "empty input" );

    if ( header->starts_with( "aig " ) )
        throw unsupported_format( "binary AIGER is not supported; convert with aigtoaig to ASCII" );

    if ( !header->starts_with( "aag " ) )
        throw parse_error( 1, "expected 'aag' header" );

    const auto h = parse_numbers( header->substr( 4 ), 1 );

    if ( h.size() != 5 && h.size() != 7 && h.size() != 9 )
        throw parse_error( 1, "header must be 'aag M I L O A' or 'aag M I L O A B C [J F]'" );

    const auto m = h[ 0 ];
    const auto num_inputs = h[ 1 ], num_latches = h[ 2 ], num_outputs = h[ 3 ], num_ands = h[ 4 ];
    const auto num_bad = h.size() > 5 ? h[ 5 ] : 0;
    const auto num_constraints = h.size() > 6 ? h[ 6 ] : 0;
    const auto num_justice = h.size() > 7 ? h[ 7 ] : 0;
    const auto num_fairness = h.size() > 8 ? h[ 8 ] : 0;

    if ( num_justice != 0 || num_fairness != 0 )
        throw parse_error( 1, "justice/fairness properties are not supported (safety only)" );

    if ( m > 0x3fffffff )
        throw parse_error( 1, "maximum variable index too large" );

    if ( num_inputs + num_latches + num_ands > m )
        throw parse_error( 1, "M is smaller than I + L + A" );

    auto c = Circuit{};
    c.max_var = static_cast< std::uint32_t >( m );

    // 0 = undefined, 1 = input, 2 = latch, 3 = gate
    auto defined = std::vector< std::uint8_t >( m + 1, 0 );

    const auto read_line = [ & ]( const char* what ) {
        const auto line = reader.next();
        if ( !line )
            throw parse_error( reader.line() + 1, std::string( "unexpected end of file, expected " ) + what );
        return parse_numbers( *line, reader.line() );
    };

    const auto check_lit = [ & ]( std::uint64_t lit ) {
        if ( lit / 2 > m )
            throw parse_error( reader.line(), "literal " + std::to_string( lit ) + " exceeds maximum variable index" );
        return AigLit{ static_cast< std::uint32_t >( lit ) };
    };

    const auto define = [ & ]( std::uint64_t lit, std::uint8_t kind ) {
        if ( lit % 2 != 0 || lit < 2 )
            throw parse_error( reader.line(), "defined literal must be positive and non-constant" );
        const auto var = check_lit( lit ).var();
        if ( defined[ var ] != 0 )
            throw parse_error( reader.line(), "variable " + std::to_string( var ) + " defined twice" );
        defined[ var ] = kind;
        return var;
    };

    for ( std::uint64_t k = 0; k < num_inputs; ++k )
    {
        const auto nums = read_line( "input" );
        if ( nums.size() != 1 )
            throw parse_error( reader.line(), "input line must contain one literal" );
        c.inputs.push_back( define( nums[ 0 ], 1 ) );
    }

    for ( std::uint64_t k = 0; k < num_latches; ++k )
    {
        const auto nums = read_line( "latch" );
        if ( nums.size() != 2 && nums.size() != 3 )
            throw parse_error( reader.line(), "latch line must be 'lit next [init]'" );

        auto latch = Latch{};
        latch.var = define( nums[ 0 ], 2 );
        latch.next = check_lit( nums[ 1 ] );

        if ( nums.size() == 3 )
        {
            if ( nums[ 2 ] == nums[ 0 ] )
                throw parse_error( reader.line(), "uninitialized latches are not supported" );
            if ( nums[ 2 ] > 1 )
                throw parse_error( reader.line(), "latch reset must be 0, 1 or the latch literal" );
            latch.init = nums[ 2 ] == 1;
        }

        c.latches.push_back( latch );
    }

    const auto read_lits = [ & ]( std::uint64_t count, std::vector< AigLit >& into, const char* what ) {
        for ( std::uint64_t k = 0; k < count; ++k )
        {
            const auto nums = read_line( what );
            if ( nums.size() != 1 )
                throw parse_error( reader.line(), std::string( what ) + " line must contain one literal" );
            into.push_back( check_lit( nums[ 0 ] ) );
        }
    };

    read_lits( num_outputs, c.outputs, "output" );
    read_lits( num_bad, c.bad, "bad" );
    read_lits( num_constraints, c.constraints, "constraint" );

    std::uint32_t last_out = 0;

    for ( std::uint64_t k = 0; k < num_ands; ++k )
    {
        const auto nums = read_line( "and gate" );
        if ( nums.size() != 3 )
            throw parse_error( reader.line(), "and line must be 'lhs rhs0 rhs1'" );

        auto gate = AndGate{};
        gate.out = define( nums[ 0 ], 3 );
        gate.in0 = check_lit( nums[ 1 ] );
        gate.in1 = check_lit( nums[ 2 ] );

        if ( gate.out <= last_out || gate.out <= gate.in0.var() || gate.out <= gate.in1.var() )
            throw parse_error( reader.line(), "and gates are not in topological order" );

        last_out = gate.out;
        c.gates.push_back( gate );
    }

    // Every referenced variable must be defined.
    const auto check_defined = [ & ]( AigLit lit ) {
        if ( !lit.is_constant() && defined[ lit.var() ] == 0 )
            throw parse_error( reader.line(), "variable " + std::to_string( lit.var() ) + " is used but never defined" );
    };

    for ( const auto& l : c.latches )
        check_defined( l.next );
    for ( const auto& g : c.gates )
    {
        check_defined( g.in0 );
        check_defined( g.in1 );
    }
    for ( const auto* list : { &c.outputs, &c.bad, &c.constraints } )
        for ( const auto lit : *list )
            check_defined( lit );

    return c;
}

std::string unparse_aiger( const Circuit& c )
{
    auto ss = std::ostringstream{};
    const auto extended = !c.bad.empty() || !c.constraints.empty();

    ss << "aag " << c.max_var << ' ' << c.inputs.size() << ' ' << c.latches.size() << ' '
       << c.outputs.size() << ' ' << c.gates.size();

    if ( extended )
        ss << ' ' << c.bad.size() << ' ' << c.constraints.size();

    ss << '\n';

    for ( const auto v : c.inputs )
        ss << 2 * v << '\n';
    for ( const auto& l : c.latches )
        ss << 2 * l.var << ' ' << l.next.code << ' ' << ( l.init ? 1 : 0 ) << '\n';
    for ( const auto lit : c.outputs )
        ss << lit.code << '\n';
    for ( const auto lit : c.bad )
        ss << lit.code << '\n';
    for ( const auto lit : c.constraints )
        ss << lit.code << '\n';
    for ( const auto& g : c.gates )
        ss << 2 * g.out << ' ' << g.in0.code << ' ' << g.in1.code << '\n';

    return ss.str();
}

std::vector< bool > evaluate( const Circuit& c,
                              const std::vector< bool >& state,
                              const std::vector< bool >& input,
                              std::vector< bool >* node_values )
{
    auto values = std::vector< bool >( c.max_var + 1, false );

    for ( std::size_t k = 0; k < c.inputs.size(); ++k )
        values[ c.inputs[ k ] ] = input[ k ];
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        values[ c.latches[ k ].var ] = state[ k ];

    const auto value = [ & ]( AigLit l ) { return values[ l.var() ] != l.negated(); };

    for ( const auto& g : c.gates )
        values[ g.out ] = value( g.in0 ) && value( g.in1 );

    auto next = std::vector< bool >( c.latches.size() );
    for ( std::size_t k = 0; k < c.latches.size(); ++k )
        next[ k ] = value( c.latches[ k ].next );

    if ( node_values )
        *node_values = std::move( values );

    return next;
}

} // namespace pogen
