/*!
  \file pom.hpp
  \brief Policy: softmax-with-temperature sampling over predicted sizes

  Predicted sizes (smaller is better) are negated, divided by the temperature
  and passed through a max-shifted softmax; the next recipe — or, in two-step
  mode, the next ordered recipe pair — is drawn by inverse-CDF sampling from
  the resulting distribution. Temperature is the single exploration knob: low
  temperatures concentrate on the predicted argmin, high temperatures
  approach uniform sampling.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <vector>

#include "common.hpp"
#include "prm.hpp"

namespace migdse
{

enum class policy_mode
{
  uniform,
  guided_1sa,
  guided_2sa
};

inline char const* to_string( policy_mode m )
{
  switch ( m )
  {
  case policy_mode::uniform:
    return "uniform";
  case policy_mode::guided_1sa:
    return "1sa";
  case policy_mode::guided_2sa:
    return "2sa";
  }
  return "";
}

/*! \brief Sampling configuration of one exploration run */
struct policy_config
{
  policy_mode mode{ policy_mode::uniform };
  double temperature{ 5.0 }; //!< must be positive in guided modes
};

/*! \brief Probabilities ∝ exp(−size/T), computed with a max shift.
 *
 * Smaller predicted sizes receive higher probability. Throws on an empty
 * input, non-finite entries, or a non-positive temperature.
 */
template<typename Container>
std::vector<double> softmax_temperature( Container const& sizes, double temperature )
{
  if ( std::size( sizes ) == 0 )
    throw error( "softmax over an empty prediction list" );
  if ( !( temperature > 0.0 ) || !std::isfinite( temperature ) )
    throw error( "softmax temperature must be positive and finite" );

  std::vector<double> z;
  z.reserve( std::size( sizes ) );
  for ( double s : sizes )
  {
    if ( !std::isfinite( s ) )
      throw error( "softmax input must be finite" );
    z.push_back( -s / temperature );
  }
  double const shift = *std::max_element( z.begin(), z.end() );
  double sum = 0.0;
  for ( auto& v : z )
  {
    v = std::exp( v - shift );
    sum += v;
  }
  for ( auto& v : z )
    v /= sum;
  return z;
}

/*! \brief Inverse-CDF draw from a probability vector; validates the input */
inline size_t sample_action( std::vector<double> const& probs, rng_stream& rng )
{
  if ( probs.empty() )
    throw error( "cannot sample from an empty distribution" );
  double total = 0.0;
  for ( double p : probs )
  {
    if ( !std::isfinite( p ) || p < 0.0 || p > 1.0 )
      throw error( "invalid probability value" );
    total += p;
  }
  if ( std::abs( total - 1.0 ) > 1e-9 )
    throw error( "probabilities do not sum to one" );

  double const u = rng.next_double() * total;
  double cum = 0.0;
  for ( size_t i = 0; i < probs.size(); ++i )
  {
    cum += probs[i];
    if ( u < cum )
      return i;
  }
  return probs.size() - 1;
}

/*! \brief Selects the next recipe (or committed pair in two-step mode).
 *
 * Uniform mode ignores the model and draws one of the 30 recipes uniformly.
 * Guided one-step mode samples from the softmax over 30 predicted sizes;
 * guided two-step mode samples one of the 900 ordered pairs and commits both
 * steps of the plan before the next prediction.
 */
inline std::vector<uint32_t> select_step( policy_config const& policy, prediction_model const* model,
                                          prediction_context const& ctx, rng_stream& rng )
{
  switch ( policy.mode )
  {
  case policy_mode::uniform:
    return { static_cast<uint32_t>( rng.next_below( num_recipes ) ) };

  case policy_mode::guided_1sa:
  {
    if ( !model )
      throw error( "guided mode requires a fitted model" );
    if ( std::holds_alternative<stat_model_2sa>( *model ) )
      throw error( "one-step policy cannot use a pair model" );
    if ( ctx.past.empty() )
      throw error( "guided selection requires the current state" );
    std::array<double, num_recipes> preds{};
    if ( auto const* m = std::get_if<stat_model_1sa>( model ) )
    {
      preds = predict_1sa( *m, static_cast<double>( target_value( ctx.past.front(), m->target ) ) );
    }
    else
    {
      preds = predict_1sa( std::get<context_model>( *model ), ctx );
    }
    auto const probs = softmax_temperature( preds, policy.temperature );
    return { static_cast<uint32_t>( sample_action( probs, rng ) ) };
  }

  case policy_mode::guided_2sa:
  {
    if ( !model )
      throw error( "guided mode requires a fitted model" );
    auto const* m = std::get_if<stat_model_2sa>( model );
    if ( !m )
      throw error( "two-step policy requires a pair model" );
    if ( ctx.past.empty() )
      throw error( "guided selection requires the current state" );
    auto const preds =
        predict_2sa( *m, static_cast<double>( target_value( ctx.past.front(), m->target ) ) );
    auto const probs = softmax_temperature( preds, policy.temperature );
    auto const idx = static_cast<uint32_t>( sample_action( probs, rng ) );
    return { idx / num_recipes, idx % num_recipes };
  }
  }
  throw error( "invalid policy mode" );
}

} // namespace migdse
