/*!
  \file synthetic_env.hpp
  \brief Closed-form test environment with pair-dependent dynamics

  A scalar "size" evolves under 30 stochastic rules, one per recipe: applying
  recipe r adds a uniform draw from [mean−w, mean+w], optionally gated on the
  previous recipe (the rule only fires if the immediately preceding recipe was
  a required one). The size is clamped at a floor. This gives the search
  engine a world whose optimal behaviour is known in closed form.

  The default bench encodes a pair trap: recipe 28 looks harmful in isolation
  (+3) but unlocks recipe 29's −8, so the ordered pair nets −5 while one-step
  statistics rank 28 as the worst action. Pair-aware lookahead provably beats
  one-step lookahead here, which is exactly what it exists to test.
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "metrics.hpp"
#include "recipes.hpp"

namespace migdse
{

/*! \brief Effect of one recipe on the synthetic size */
struct synthetic_rule
{
  double mean{ 0.0 };
  double half_width{ 0.0 };      //!< noise: uniform over [mean−w, mean+w]
  int32_t requires_prev{ -1 };   //!< rule fires only if previous recipe == this (−1: always)

  bool operator==( synthetic_rule const& ) const = default;
};

/*! \brief Scalar-size environment driven by per-recipe rules */
class synthetic_environment
{
public:
  struct state
  {
    double size{ 0.0 };
    int32_t prev_recipe{ -1 };

    bool operator==( state const& ) const = default;
  };
  using snapshot_type = state;

  synthetic_environment( double start, double floor, std::vector<synthetic_rule> rules )
      : state_{ start, -1 }, start_( start ), floor_( floor ), rules_( std::move( rules ) ), rng_( 0 )
  {
    if ( rules_.size() != num_recipes )
      throw error( "synthetic environment needs exactly 30 rules" );
    if ( start < floor )
      throw error( "synthetic start size below floor" );
  }

  state snapshot() const { return state_; }
  void restore( state const& s ) { state_ = s; }

  void apply( uint32_t recipe )
  {
    if ( recipe >= rules_.size() )
      throw error( "recipe id " + std::to_string( recipe ) + " out of range" );
    auto const& rule = rules_[recipe];
    if ( rule.requires_prev < 0 || rule.requires_prev == state_.prev_recipe )
    {
      double const delta = rule.half_width > 0.0
                               ? rng_.next_real( rule.mean - rule.half_width, rule.mean + rule.half_width )
                               : rule.mean;
      state_.size = std::max( floor_, state_.size + delta );
    }
    state_.prev_recipe = static_cast<int32_t>( recipe );
  }

  /*! \brief All four metric slots carry the rounded scalar size */
  metric_vector current_metrics() const
  {
    int64_t const s = static_cast<int64_t>( std::llround( state_.size ) );
    return { s, s, s, s };
  }

  void reseed( uint64_t seed ) { rng_ = rng_stream( seed ); }

  double size() const { return state_.size; }
  double start() const { return start_; }
  double floor() const { return floor_; }
  std::vector<synthetic_rule> const& rules() const { return rules_; }

private:
  state state_;
  double start_;
  double floor_;
  std::vector<synthetic_rule> rules_;
  rng_stream rng_;
};

inline constexpr double synthetic_default_start = 200.0;
inline constexpr double synthetic_default_floor = 50.0;

/*! \brief The published pair-trap parameterization (see file brief) */
inline synthetic_environment synthetic_default_bench()
{
  std::vector<synthetic_rule> rules( num_recipes, synthetic_rule{ 0.0, 2.0, -1 } );
  rules[26] = { -1.0, 1.0, -1 };
  rules[27] = { -1.0, 1.0, -1 };
  rules[28] = { 3.0, 0.0, -1 };
  rules[29] = { -8.0, 0.0, 28 };
  return synthetic_environment( synthetic_default_start, synthetic_default_floor, std::move( rules ) );
}

/*! \brief Rule-set serialization for config files */
inline std::string synthetic_rules_to_json( synthetic_environment const& env )
{
  nlohmann::ordered_json j;
  j["start"] = env.start();
  j["floor"] = env.floor();
  auto rules = nlohmann::ordered_json::array();
  for ( auto const& r : env.rules() )
  {
    nlohmann::ordered_json jr;
    jr["mean"] = r.mean;
    jr["half_width"] = r.half_width;
    jr["requires_prev"] = r.requires_prev;
    rules.push_back( std::move( jr ) );
  }
  j["rules"] = std::move( rules );
  return j.dump() + "\n";
}

inline synthetic_environment synthetic_rules_from_json( std::string const& text )
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( std::string( "invalid synthetic config: " ) + e.what() );
  }
  try
  {
    std::vector<synthetic_rule> rules;
    for ( auto const& jr : j.at( "rules" ) )
    {
      rules.push_back( { jr.at( "mean" ).get<double>(), jr.at( "half_width" ).get<double>(),
                         jr.at( "requires_prev" ).get<int32_t>() } );
    }
    return synthetic_environment( j.at( "start" ).get<double>(), j.at( "floor" ).get<double>(),
                                  std::move( rules ) );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( std::string( "incomplete synthetic config: " ) + e.what() );
  }
}

} // namespace migdse
