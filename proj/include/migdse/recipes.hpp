/*!
  \file recipes.hpp
  \brief The fixed table of 30 optimization recipes

  A recipe is a short, deterministic sequence of passes applied as one atomic
  action. The table is pinned: 6 rewriting recipes (rule set × area policy),
  8 resubstitution recipes (window leaves × divisor cap), 8 refactoring
  recipes (cone inputs × area policy), 2 balancing recipes, functional sweep,
  inverter optimization, and 4 two-pass composites. Ids are dense, stable
  labels — they are recorded in trajectories and consumed as model features —
  and the exported manifest plus its hash make logged data self-describing.
*/

#pragma once

#include <string>
#include <vector>

#include "common.hpp"
#include "mig.hpp"
#include "passes/balance.hpp"
#include "passes/invert_opt.hpp"
#include "passes/refactor.hpp"
#include "passes/resub.hpp"
#include "passes/rewrite.hpp"
#include "passes/sweep.hpp"

namespace migdse
{

inline constexpr uint32_t num_recipes = 30;

enum class pass_family
{
  rewrite,
  resub,
  refactor,
  balance,
  sweep,
  invert_opt
};

/*! \brief One pass invocation; only the fields of its family are meaningful */
struct pass_spec
{
  pass_family family{};
  rewrite_rules rules{};
  bool allow_area_increase{ false };
  uint32_t leaves{ 0 };
  uint32_t divisors{ 0 };
  uint32_t cone_inputs{ 0 };
  balance_mode mode{};
  uint32_t rounds{ 0 };

  static pass_spec make_rewrite( rewrite_rules r, bool grow )
  {
    pass_spec p;
    p.family = pass_family::rewrite;
    p.rules = r;
    p.allow_area_increase = grow;
    return p;
  }
  static pass_spec make_resub( uint32_t leaves, uint32_t divisors )
  {
    pass_spec p;
    p.family = pass_family::resub;
    p.leaves = leaves;
    p.divisors = divisors;
    return p;
  }
  static pass_spec make_refactor( uint32_t cone_inputs, bool grow )
  {
    pass_spec p;
    p.family = pass_family::refactor;
    p.cone_inputs = cone_inputs;
    p.allow_area_increase = grow;
    return p;
  }
  static pass_spec make_balance( balance_mode m )
  {
    pass_spec p;
    p.family = pass_family::balance;
    p.mode = m;
    return p;
  }
  static pass_spec make_sweep( uint32_t rounds = 4 )
  {
    pass_spec p;
    p.family = pass_family::sweep;
    p.rounds = rounds;
    return p;
  }
  static pass_spec make_invert_opt()
  {
    pass_spec p;
    p.family = pass_family::invert_opt;
    return p;
  }
};

enum class recipe_family
{
  rewrite,
  resub,
  refactor,
  balance,
  sweep,
  invert_opt,
  composite
};

/*! \brief A table entry: stable id, family label, and the pass sequence */
struct recipe_spec
{
  uint32_t id{ 0 };
  recipe_family family{};
  std::vector<pass_spec> passes;
};

/*! \brief The full fixed recipe table, indexed by id */
inline std::vector<recipe_spec> const& recipe_table()
{
  static std::vector<recipe_spec> const table = [] {
    std::vector<recipe_spec> t;
    auto add = [&]( recipe_family fam, std::vector<pass_spec> passes ) {
      t.push_back( { static_cast<uint32_t>( t.size() ), fam, std::move( passes ) } );
    };
    for ( auto rules : { rewrite_rules::associativity, rewrite_rules::distributivity, rewrite_rules::all } )
      for ( bool grow : { false, true } )
        add( recipe_family::rewrite, { pass_spec::make_rewrite( rules, grow ) } );
    for ( uint32_t leaves : { 6u, 8u, 10u, 12u } )
      for ( uint32_t divisors : { 8u, 16u } )
        add( recipe_family::resub, { pass_spec::make_resub( leaves, divisors ) } );
    for ( uint32_t inputs : { 4u, 6u, 8u, 10u } )
      for ( bool grow : { false, true } )
        add( recipe_family::refactor, { pass_spec::make_refactor( inputs, grow ) } );
    add( recipe_family::balance, { pass_spec::make_balance( balance_mode::strict ) } );
    add( recipe_family::balance, { pass_spec::make_balance( balance_mode::relaxed ) } );
    add( recipe_family::sweep, { pass_spec::make_sweep() } );
    add( recipe_family::invert_opt, { pass_spec::make_invert_opt() } );
    add( recipe_family::composite,
         { pass_spec::make_sweep(), pass_spec::make_rewrite( rewrite_rules::all, false ) } );
    add( recipe_family::composite,
         { pass_spec::make_resub( 10, 16 ), pass_spec::make_balance( balance_mode::strict ) } );
    add( recipe_family::composite,
         { pass_spec::make_refactor( 6, false ), pass_spec::make_sweep() } );
    add( recipe_family::composite,
         { pass_spec::make_rewrite( rewrite_rules::all, true ), pass_spec::make_resub( 8, 8 ) } );
    return t;
  }();
  return table;
}

/*! \brief Applies one pass */
inline mig apply_pass( mig const& m, pass_spec const& p )
{
  switch ( p.family )
  {
  case pass_family::rewrite:
    return pass_rewrite( m, p.rules, p.allow_area_increase );
  case pass_family::resub:
    return pass_resub( m, p.leaves, p.divisors );
  case pass_family::refactor:
    return pass_refactor( m, p.cone_inputs, p.allow_area_increase );
  case pass_family::balance:
    return pass_balance( m, p.mode );
  case pass_family::sweep:
    return pass_sweep( m, p.rounds );
  case pass_family::invert_opt:
    return pass_invert_opt( m );
  }
  return m; /* unreachable */
}

/*! \brief Applies one recipe atomically; always ends cleaned up */
inline mig apply_recipe( mig const& m, recipe_spec const& spec )
{
  mig current = m;
  for ( auto const& p : spec.passes )
    current = apply_pass( current, p );
  return cleanup_dangling( current );
}

inline mig apply_recipe( mig const& m, uint32_t recipe_id )
{
  auto const& table = recipe_table();
  if ( recipe_id >= table.size() )
    throw error( "recipe id " + std::to_string( recipe_id ) + " out of range" );
  return apply_recipe( m, table[recipe_id] );
}

namespace detail
{

inline std::string pass_to_string( pass_spec const& p )
{
  auto area = [&]() { return p.allow_area_increase ? "grow" : "keep"; };
  switch ( p.family )
  {
  case pass_family::rewrite:
  {
    char const* r = p.rules == rewrite_rules::associativity ? "assoc"
                    : p.rules == rewrite_rules::distributivity ? "dist"
                                                               : "all";
    return std::string( "rewrite(rules=" ) + r + ",area=" + area() + ")";
  }
  case pass_family::resub:
    return "resub(leaves=" + std::to_string( p.leaves ) + ",divisors=" + std::to_string( p.divisors ) + ")";
  case pass_family::refactor:
    return "refactor(inputs=" + std::to_string( p.cone_inputs ) + ",area=" + area() + ")";
  case pass_family::balance:
    return std::string( "balance(mode=" ) + ( p.mode == balance_mode::strict ? "strict" : "relaxed" ) + ")";
  case pass_family::sweep:
    return "sweep(rounds=" + std::to_string( p.rounds ) + ")";
  case pass_family::invert_opt:
    return "invert_opt()";
  }
  return {};
}

inline char const* family_to_string( recipe_family f )
{
  switch ( f )
  {
  case recipe_family::rewrite:
    return "rewrite";
  case recipe_family::resub:
    return "resub";
  case recipe_family::refactor:
    return "refactor";
  case recipe_family::balance:
    return "balance";
  case recipe_family::sweep:
    return "sweep";
  case recipe_family::invert_opt:
    return "invert_opt";
  case recipe_family::composite:
    return "composite";
  }
  return "";
}

} // namespace detail

/*! \brief Line-oriented key=value manifest of the table */
inline std::string recipe_manifest()
{
  auto const& table = recipe_table();
  std::string out = "recipes.count=" + std::to_string( table.size() ) + "\n";
  for ( auto const& r : table )
  {
    out += "recipe." + std::to_string( r.id ) + ".family=" + detail::family_to_string( r.family ) + "\n";
    out += "recipe." + std::to_string( r.id ) + ".passes=";
    for ( size_t i = 0; i < r.passes.size(); ++i )
    {
      if ( i )
        out += "+";
      out += detail::pass_to_string( r.passes[i] );
    }
    out += "\n";
  }
  return out;
}

/*! \brief Stable hash of the manifest; recorded with every dataset and model */
inline uint64_t recipe_table_hash()
{
  return fnv1a64( recipe_manifest() );
}

} // namespace migdse
