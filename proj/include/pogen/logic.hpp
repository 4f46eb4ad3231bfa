#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pogen
{

// Variables are 1-based; 0 is never a valid variable.
using Var = std::int32_t;

class Lit
{
public:
    constexpr Lit() = default;
    constexpr Lit( Var v, bool negated ) : _code{ 2 * v + ( negated ? 1 : 0 ) } {}

    static constexpr Lit pos( Var v ) { return Lit{ v, false }; }
    static constexpr Lit neg( Var v ) { return Lit{ v, true }; }
    static Lit from_dimacs( int value );

    constexpr Var var() const { return _code >> 1; }
    constexpr bool negated() const { return ( _code & 1 ) != 0; }
    constexpr int index() const { return _code; }
    constexpr int to_dimacs() const { return negated() ? -var() : var(); }

    constexpr Lit operator~() const { return from_index( _code ^ 1 ); }
    constexpr Lit with_sign( bool neg ) const { return Lit{ var(), neg }; }

    static constexpr Lit from_index( int code )
    {
        Lit l;
        l._code = code;
        return l;
    }

    constexpr auto operator<=>( const Lit& ) const = default;

private:
    std::int32_t _code = 0;
};

std::ostream& operator<<( std::ostream& os, Lit lit );

class invalid_cube : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail
{

// Sorted, duplicate-free literal list without complementary pairs.
class lit_set
{
public:
    lit_set() = default;
    explicit lit_set( std::vector< Lit > lits );

    std::span< const Lit > literals() const { return _lits; }
    auto begin() const { return _lits.begin(); }
    auto end() const { return _lits.end(); }
    std::size_t size() const { return _lits.size(); }
    bool empty() const { return _lits.empty(); }
    const Lit& operator[]( std::size_t i ) const { return _lits[ i ]; }

    bool contains( Lit l ) const;
    bool contains_var( Var v ) const;
    // Literal on v, if any.
    const Lit* find_var( Var v ) const;

    Var max_var() const { return _lits.empty() ? 0 : _lits.back().var(); }

    friend bool operator==( const lit_set&, const lit_set& ) = default;

protected:
    std::vector< Lit > _lits;
};

} // namespace detail

class Clause;

// A conjunction of literals.
class Cube : public detail::lit_set
{
public:
    Cube() = default;
    explicit Cube( std::vector< Lit > lits ) : lit_set( std::move( lits ) ) {}
    Cube( std::initializer_list< Lit > lits ) : lit_set( std::vector< Lit >( lits ) ) {}

    Clause negate() const;
    Cube without( Lit l ) const;
    Cube with( Lit l ) const;

    friend bool operator==( const Cube&, const Cube& ) = default;
};

// A disjunction of literals.
class Clause : public detail::lit_set
{
public:
    Clause() = default;
    explicit Clause( std::vector< Lit > lits ) : lit_set( std::move( lits ) ) {}
    Clause( std::initializer_list< Lit > lits ) : lit_set( std::vector< Lit >( lits ) ) {}

    Cube negate() const;

    friend bool operator==( const Clause&, const Clause& ) = default;
};

// True iff `a` denotes a superset of the states of `b`, i.e. lits(a) ⊆ lits(b).
bool subsumes( const Cube& a, const Cube& b );

// Normalizes a raw literal list: sorts and deduplicates. Returns false for
// tautologies (a variable in both polarities).
bool normalize_clause( std::vector< Lit >& lits );

// Assignment indexed by variable; index 0 unused.
using Assignment = std::vector< bool >;

class Cnf
{
public:
    Cnf() = default;
    explicit Cnf( Var num_vars ) : _num_vars{ num_vars } {}

    // Adds a normalized copy of `lits`. Tautologies are dropped and reported
    // by returning false.
    bool add( std::vector< Lit > lits );
    bool add( std::initializer_list< Lit > lits ) { return add( std::vector< Lit >( lits ) ); }
    void add( const Clause& c );
    void append( const Cnf& other );

    const std::vector< Clause >& clauses() const { return _clauses; }
    std::size_t size() const { return _clauses.size(); }
    bool empty() const { return _clauses.empty(); }

    Var num_vars() const { return _num_vars; }
    void set_num_vars( Var n ) { _num_vars = n; }

    bool eval( const Assignment& values ) const;

    // Applies `map` (indexed by variable) to every literal; variables mapped
    // to 0 keep their identity.
    Cnf rename( const std::vector< Var >& map ) const;

    void write_dimacs( std::ostream& os ) const;

    friend bool operator==( const Cnf&, const Cnf& ) = default;

private:
    std::vector< Clause > _clauses;
    Var _num_vars = 0;
};

bool eval( const Clause& c, const Assignment& values );
bool eval( const Cube& c, const Assignment& values );
inline bool eval( const Cnf& f, const Assignment& values ) { return f.eval( values ); }

// Assignment of all variables in `cube` on top of `base`.
void apply( const Cube& cube, Assignment& values );

std::string to_string( const Cube& c );
std::string to_string( const Clause& c );

} // namespace pogen
