#include "pogen/logic.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace pogen
{

Lit Lit::from_dimacs( int value )
{
    if ( value == 0 )
        throw std::invalid_argument( "literal 0 is not a valid literal" );

    return value > 0 ? pos( value ) : neg( -value );
}

std::ostream& operator<<( std::ostream& os, Lit lit )
{
    return os << lit.to_dimacs();
}

namespace detail
{

lit_set::lit_set( std::vector< Lit > lits ) : _lits{ std::move( lits ) }
{
    std::sort( _lits.begin(), _lits.end() );
    _lits.erase( std::unique( _lits.begin(), _lits.end() ), _lits.end() );

    for ( std::size_t i = 1; i < _lits.size(); ++i )
        if ( _lits[ i ].var() == _lits[ i - 1 ].var() )
            throw invalid_cube( "variable " + std::to_string( _lits[ i ].var() ) +
                                " occurs in both polarities" );

    for ( const auto l : _lits )
        if ( l.var() <= 0 )
            throw invalid_cube( "invalid variable in literal set" );
}

bool lit_set::contains( Lit l ) const
{
    return std::binary_search( _lits.begin(), _lits.end(), l );
}

const Lit* lit_set::find_var( Var v ) const
{
    const auto it = std::lower_bound( _lits.begin(), _lits.end(), Lit::pos( v ) );

    if ( it != _lits.end() && it->var() == v )
        return &*it;

    return nullptr;
}

bool lit_set::contains_var( Var v ) const
{
    return find_var( v ) != nullptr;
}

} // namespace detail

Clause Cube::negate() const
{
    auto lits = std::vector< Lit >{};
    lits.reserve( size() );

    for ( const auto l : *this )
        lits.push_back( ~l );

    return Clause{ std::move( lits ) };
}

Cube Cube::without( Lit l ) const
{
    auto lits = std::vector< Lit >{};
    lits.reserve( size() );

    for ( const auto x : *this )
        if ( x != l )
            lits.push_back( x );

    return Cube{ std::move( lits ) };
}

Cube Cube::with( Lit l ) const
{
    auto lits = std::vector< Lit >( begin(), end() );
    lits.push_back( l );
    return Cube{ std::move( lits ) };
}

Cube Clause::negate() const
{
    auto lits = std::vector< Lit >{};
    lits.reserve( size() );

    for ( const auto l : *this )
        lits.push_back( ~l );

    return Cube{ std::move( lits ) };
}

bool subsumes( const Cube& a, const Cube& b )
{
    return std::includes( b.begin(), b.end(), a.begin(), a.end() );
}

bool normalize_clause( std::vector< Lit >& lits )
{
    std::sort( lits.begin(), lits.end() );
    lits.erase( std::unique( lits.begin(), lits.end() ), lits.end() );

    for ( std::size_t i = 1; i < lits.size(); ++i )
        if ( lits[ i ].var() == lits[ i - 1 ].var() )
            return false;

    return true;
}

bool Cnf::add( std::vector< Lit > lits )
{
    if ( !normalize_clause( lits ) )
        return false;

    for ( const auto l : lits )
        _num_vars = std::max( _num_vars, l.var() );

    _clauses.emplace_back( std::move( lits ) );
    return true;
}

void Cnf::add( const Clause& c )
{
    _num_vars = std::max( _num_vars, c.max_var() );
    _clauses.push_back( c );
}

void Cnf::append( const Cnf& other )
{
    for ( const auto& c : other.clauses() )
        add( c );

    _num_vars = std::max( _num_vars, other.num_vars() );
}

bool eval( const Clause& c, const Assignment& values )
{
    return std::any_of( c.begin(), c.end(), [ & ]( Lit l ) {
        return values[ l.var() ] != l.negated();
    } );
}

bool eval( const Cube& c, const Assignment& values )
{
    return std::all_of( c.begin(), c.end(), [ & ]( Lit l ) {
        return values[ l.var() ] != l.negated();
    } );
}

bool Cnf::eval( const Assignment& values ) const
{
    return std::all_of( _clauses.begin(), _clauses.end(), [ & ]( const Clause& c ) {
        return pogen::eval( c, values );
    } );
}

Cnf Cnf::rename( const std::vector< Var >& map ) const
{
    auto out = Cnf{ _num_vars };

    for ( const auto& c : _clauses )
    {
        auto lits = std::vector< Lit >{};
        lits.reserve( c.size() );

        for ( const auto l : c )
        {
            const auto v = l.var() < static_cast< Var >( map.size() ) && map[ l.var() ] != 0
                                   ? map[ l.var() ]
                                   : l.var();
            lits.emplace_back( v, l.negated() );
        }

        out.add( std::move( lits ) );
    }

    out.set_num_vars( std::max( out.num_vars(), _num_vars ) );
    return out;
}

void Cnf::write_dimacs( std::ostream& os ) const
{
    os << "p cnf " << _num_vars << ' ' << _clauses.size() << '\n';

    for ( const auto& c : _clauses )
    {
        for ( const auto l : c )
            os << l.to_dimacs() << ' ';
        os << "0\n";
    }
}

void apply( const Cube& cube, Assignment& values )
{
    for ( const auto l : cube )
        values[ l.var() ] = !l.negated();
}

std::string to_string( const Cube& c )
{
    auto ss = std::ostringstream{};
    ss << '[';

    for ( std::size_t i = 0; i < c.size(); ++i )
        ss << ( i ? " " : "" ) << c[ i ];

    ss << ']';
    return ss.str();
}

std::string to_string( const Clause& c )
{
    auto ss = std::ostringstream{};
    ss << '(';

    for ( std::size_t i = 0; i < c.size(); ++i )
        ss << ( i ? " | " : "" ) << c[ i ];

    ss << ')';
    return ss.str();
}

} // namespace pogen
