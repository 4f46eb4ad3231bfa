#pragma once

#include "pogen/logic.hpp"

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace pogen::sat
{

enum class Status : std::uint8_t
{
    sat,
    unsat,
    unknown // interrupted
};

enum class Polarity : std::uint8_t
{
    false_first,
    true_first,
    phase_saving
};

struct Stats
{
    std::uint64_t solves = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learnts = 0;

    Stats& operator+=( const Stats& o );
};

class inconsistent_assignment : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class incomplete_propagation : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class Solver;

// Result of propagating a full assignment: who implied what.
struct ImplicationView
{
    static constexpr int decision = -1;
    static constexpr int unassigned = -2;

    std::vector< std::int8_t > value; // per var: 1, -1 or 0
    std::vector< int > reason;        // clause id, decision or unassigned
    std::vector< int > order;         // trail position, -1 if unassigned
    std::vector< Lit > trail;

    bool assigned( Var v ) const { return value[ v ] != 0; }
    bool is_true( Lit l ) const { return value[ l.var() ] == ( l.negated() ? -1 : 1 ); }
};

class Solver
{
public:
    Solver();
    explicit Solver( Var num_vars ) : Solver() { reserve_vars( num_vars ); }

    Var new_var();
    void reserve_vars( Var n );
    Var num_vars() const { return _num_vars; }

    // Returns the clause id; ids of non-learnt clauses never change.
    int add_clause( std::span< const Lit > lits );
    int add_clause( std::initializer_list< Lit > lits ) { return add_clause( std::span( lits.begin(), lits.size() ) ); }
    int add_clause( const Clause& c ) { return add_clause( c.literals() ); }
    void add_cnf( const Cnf& f );

    // False once the clause database is unsatisfiable without assumptions.
    bool okay() const { return _ok; }

    Status solve( std::span< const Lit > assumptions = {} );
    Status solve( std::initializer_list< Lit > assumptions ) { return solve( std::span( assumptions.begin(), assumptions.size() ) ); }
    Status solve( const Cube& assumptions ) { return solve( assumptions.literals() ); }

    // After sat: complete model.
    bool model_value( Var v ) const { return _model[ v ]; }
    bool model_value( Lit l ) const { return _model[ l.var() ] != l.negated(); }
    const Assignment& model() const { return _model; }

    // After unsat: the assumptions involved in the final conflict.
    const std::vector< Lit >& core() const { return _core; }
    bool in_core( Lit l ) const;

    void set_polarity( Polarity p ) { _polarity = p; }
    Polarity polarity() const { return _polarity; }

    // Variables decided first, in this order, before the activity order.
    void set_priority( std::vector< Var > vars ) { _priority = std::move( vars ); }

    // Bumps the activity of v so that it is decided early.
    void bump( Var v, double amount = 1.0 );

    // Unit propagation of `assignment` from the top level. Throws
    // inconsistent_assignment on conflict and incomplete_propagation when
    // one of `required` stays unassigned.
    ImplicationView propagate_with( std::span< const Lit > assignment, std::span< const Var > required = {} );

    std::span< const Lit > clause_literals( int id ) const { return _clauses[ id ].lits; }
    std::size_t num_clauses() const { return _clauses.size(); }

    // Stop flag polled during search; solve() then returns unknown.
    void set_interrupt( const std::atomic< bool >* flag ) { _interrupt = flag; }
    void set_conflict_limit( std::int64_t limit ) { _conflict_limit = limit; }

    const Stats& stats() const { return _stats; }

    // Original (non-learnt) clauses in DIMACS.
    void write_dimacs( std::ostream& os ) const;

private:
    struct ClauseData
    {
        std::vector< Lit > lits;
        double activity = 0.0;
        bool learnt = false;
        bool removed = false;
    };

    struct Watcher
    {
        int cref;
        Lit blocker;
    };

    std::int8_t value( Lit l ) const
    {
        const auto v = _assigns[ l.var() ];
        return l.negated() ? static_cast< std::int8_t >( -v ) : v;
    }

    int level() const { return static_cast< int >( _trail_lim.size() ); }

    void enqueue( Lit l, int reason );
    int propagate();
    void analyze( int confl, std::vector< Lit >& learnt, int& backtrack_level );
    void analyze_final( Lit p );
    void cancel_until( int lvl );
    Lit pick_branch();
    void attach( int cref );
    int alloc_clause( std::vector< Lit > lits, bool learnt );
    void reduce_db();
    void rebuild_watches();
    Status search( std::int64_t conflict_budget, std::span< const Lit > assumptions );

    void heap_insert( Var v );
    void heap_up( int pos );
    void heap_down( int pos );
    Var heap_pop();
    bool heap_less( Var a, Var b ) const;
    void bump_var( Var v );
    void bump_clause( int cref );

    Var _num_vars = 0;
    bool _ok = true;

    std::vector< ClauseData > _clauses;
    std::vector< int > _free_slots;
    std::vector< int > _learnt_refs;
    std::vector< std::vector< Watcher > > _watches; // by literal index

    std::vector< std::int8_t > _assigns;
    std::vector< int > _level;
    std::vector< int > _reason;
    std::vector< bool > _phase;
    std::vector< Lit > _trail;
    std::vector< int > _trail_lim;
    std::size_t _qhead = 0;

    std::vector< double > _activity;
    double _var_inc = 1.0;
    double _cla_inc = 1.0;
    std::vector< Var > _heap;
    std::vector< int > _heap_pos;

    std::vector< char > _seen;
    std::vector< Lit > _analyze_clear;
    std::vector< Lit > _core;
    Assignment _model;

    Polarity _polarity = Polarity::phase_saving;
    std::vector< Var > _priority;

    double _max_learnts = 0.0;
    const std::atomic< bool >* _interrupt = nullptr;
    std::int64_t _conflict_limit = -1;
    Stats _stats;
};

} // namespace pogen::sat
