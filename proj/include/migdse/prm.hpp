/*!
  \file prm.hpp
  \brief Recipe-performance prediction: fit models on trajectories, predict sizes

  Three model kinds estimate the target metric after applying candidate
  recipes to the current circuit:

  - `stat_model_1sa` — per-recipe mean observed delta, with a global-mean
    fallback for recipes never seen in training.
  - `stat_model_2sa` — per-ordered-pair (30×30) mean two-step cumulative
    delta; unseen pairs fall back to the sum of the two one-step means.
  - `context_model` — a one-hidden-layer ReLU regressor over the candidate
    recipe (one-hot) plus a normalized window of up to C past metric vectors
    with a validity mask; trained by mini-batch SGD with manual
    backpropagation, deterministic under a fixed seed.

  All models predict the absolute next size as `current + predicted delta`.
  Models serialize to a JSON document carrying kind, target metric and the
  recipe-table hash so stale models are detected when reloaded.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "metrics.hpp"
#include "recipes.hpp"
#include "trajectory.hpp"

namespace migdse
{

/*! \brief Fit/evaluation summary: error, sample count, settings used */
struct train_report
{
  double rmse{ 0.0 };
  uint64_t samples{ 0 };
  std::string hyper; //!< human-readable hyperparameter summary
};

/*! \brief Metric history available when predicting; `past[0]` is the current state */
struct prediction_context
{
  std::vector<metric_vector> past;
};

/* ------------------------------------------------------------------ */
/* statistical models                                                  */
/* ------------------------------------------------------------------ */

/*! \brief Per-recipe mean one-step delta with global fallback */
struct stat_model_1sa
{
  target_metric target{ target_metric::transistors };
  uint64_t table_hash{ 0 };
  std::array<double, num_recipes> mean_delta{};
  std::array<uint64_t, num_recipes> count{};
  double fallback{ 0.0 };    //!< mean delta over all observations
  uint64_t total_count{ 0 };

  double delta_for( uint32_t recipe ) const
  {
    return count[recipe] ? mean_delta[recipe] : fallback;
  }
};

/*! \brief Per-ordered-pair mean two-step delta; falls back to summed one-step means */
struct stat_model_2sa
{
  target_metric target{ target_metric::transistors };
  uint64_t table_hash{ 0 };
  std::vector<double> pair_mean = std::vector<double>( num_recipes * num_recipes, 0.0 );
  std::vector<uint64_t> pair_count = std::vector<uint64_t>( num_recipes * num_recipes, 0 );
  stat_model_1sa one; //!< one-step statistics used for unseen pairs

  double delta_for( uint32_t first, uint32_t second ) const
  {
    auto const i = first * num_recipes + second;
    return pair_count[i] ? pair_mean[i] : one.delta_for( first ) + one.delta_for( second );
  }
};

/*! \brief Fits per-recipe mean deltas of the target metric */
inline stat_model_1sa fit_statistical_1sa( dataset const& train, target_metric target )
{
  stat_model_1sa m;
  m.target = target;
  m.table_hash = train.table_hash;
  std::array<double, num_recipes> sum{};
  double total_sum = 0.0;
  for ( auto const& t : train.trajectories )
  {
    int64_t prev = target_value( t.initial, target );
    for ( auto const& s : t.steps )
    {
      int64_t cur = target_value( s.metrics, target );
      double delta = static_cast<double>( cur - prev );
      sum[s.recipe] += delta;
      ++m.count[s.recipe];
      total_sum += delta;
      ++m.total_count;
      prev = cur;
    }
  }
  if ( m.total_count == 0 )
    throw error( "cannot fit on an empty dataset" );
  for ( uint32_t r = 0; r < num_recipes; ++r )
    m.mean_delta[r] = m.count[r] ? sum[r] / static_cast<double>( m.count[r] ) : 0.0;
  m.fallback = total_sum / static_cast<double>( m.total_count );
  return m;
}

/*! \brief Fits mean two-step deltas over ordered recipe pairs (overlapping windows) */
inline stat_model_2sa fit_statistical_2sa( dataset const& train, target_metric target )
{
  stat_model_2sa m;
  m.target = target;
  m.table_hash = train.table_hash;
  m.one = fit_statistical_1sa( train, target );
  std::vector<double> sum( num_recipes * num_recipes, 0.0 );
  for ( auto const& t : train.trajectories )
  {
    for ( size_t i = 0; i + 1 < t.steps.size(); ++i )
    {
      int64_t before = i == 0 ? target_value( t.initial, target )
                              : target_value( t.steps[i - 1].metrics, target );
      int64_t after = target_value( t.steps[i + 1].metrics, target );
      auto const idx = t.steps[i].recipe * num_recipes + t.steps[i + 1].recipe;
      sum[idx] += static_cast<double>( after - before );
      ++m.pair_count[idx];
    }
  }
  for ( size_t i = 0; i < sum.size(); ++i )
    m.pair_mean[i] = m.pair_count[i] ? sum[i] / static_cast<double>( m.pair_count[i] ) : 0.0;
  return m;
}

/*! \brief Predicted absolute sizes after each of the 30 recipes */
inline std::array<double, num_recipes> predict_1sa( stat_model_1sa const& m, double current )
{
  std::array<double, num_recipes> out{};
  for ( uint32_t r = 0; r < num_recipes; ++r )
    out[r] = current + m.delta_for( r );
  return out;
}

/*! \brief Predicted absolute sizes after each ordered recipe pair (row-major 30×30) */
inline std::vector<double> predict_2sa( stat_model_2sa const& m, double current )
{
  std::vector<double> out( num_recipes * num_recipes );
  for ( uint32_t a = 0; a < num_recipes; ++a )
    for ( uint32_t b = 0; b < num_recipes; ++b )
      out[a * num_recipes + b] = current + m.delta_for( a, b );
  return out;
}

/* ------------------------------------------------------------------ */
/* context model                                                       */
/* ------------------------------------------------------------------ */

inline constexpr uint32_t max_context_length = 20;

/*! \brief One-hidden-layer ReLU regressor over recipe + metric history */
struct context_model
{
  target_metric target{ target_metric::transistors };
  uint64_t table_hash{ 0 };
  uint32_t context_length{ 8 }; //!< C, number of past states (1..20)
  uint32_t hidden{ 64 };        //!< H, hidden width

  std::array<double, 4> feat_mean{};  //!< per metric component
  std::array<double, 4> feat_scale{}; //!< strictly positive
  double label_mean{ 0.0 };
  double label_scale{ 1.0 };

  /* weights: w1 is H×D row-major with D = 30 + 5·C (one-hot + C metric
   * quadruples + C validity flags); w2 has length H */
  std::vector<double> w1, b1, w2;
  double b2{ 0.0 };

  uint32_t input_dim() const { return num_recipes + 5 * context_length; }

  /*! \brief Feature vector for one candidate recipe in a given context */
  std::vector<double> features( uint32_t recipe, prediction_context const& ctx ) const
  {
    std::vector<double> x( input_dim(), 0.0 );
    x[recipe] = 1.0;
    for ( uint32_t j = 0; j < context_length; ++j )
    {
      if ( j >= ctx.past.size() )
        continue;
      for ( uint32_t k = 0; k < 4; ++k )
      {
        double v = static_cast<double>( metric_component( ctx.past[j], k ) );
        x[num_recipes + 4 * j + k] = ( v - feat_mean[k] ) / feat_scale[k];
      }
      x[num_recipes + 4 * context_length + j] = 1.0;
    }
    return x;
  }

  /*! \brief Network output in normalized label space */
  double forward( std::vector<double> const& x ) const
  {
    double y = b2;
    uint32_t const d = input_dim();
    for ( uint32_t h = 0; h < hidden; ++h )
    {
      double a = b1[h];
      double const* row = w1.data() + static_cast<size_t>( h ) * d;
      for ( uint32_t i = 0; i < d; ++i )
        a += row[i] * x[i];
      if ( a > 0.0 )
        y += w2[h] * a;
    }
    return y;
  }

  /*! \brief Predicted target delta for a candidate recipe */
  double predict_delta( uint32_t recipe, prediction_context const& ctx ) const
  {
    return forward( features( recipe, ctx ) ) * label_scale + label_mean;
  }
};

/*! \brief Predicted absolute sizes per recipe from the current context */
inline std::array<double, num_recipes> predict_1sa( context_model const& m,
                                                    prediction_context const& ctx )
{
  if ( ctx.past.empty() )
    throw error( "context model prediction requires at least the current state" );
  double const current = static_cast<double>( target_value( ctx.past.front(), m.target ) );
  std::array<double, num_recipes> out{};
  for ( uint32_t r = 0; r < num_recipes; ++r )
    out[r] = current + m.predict_delta( r, ctx );
  return out;
}

/*! \brief Weight-shaped gradient container for the context model */
struct context_gradients
{
  std::vector<double> w1, b1, w2;
  double b2{ 0.0 };
};

/*! \brief Squared-error loss and its analytic gradient for one sample.
 *
 * The label is in normalized space; loss = (forward(x) − label)².
 */
inline double loss_and_gradient( context_model const& m, std::vector<double> const& x,
                                 double label, context_gradients& g )
{
  uint32_t const d = m.input_dim();
  std::vector<double> act( m.hidden );
  double y = m.b2;
  for ( uint32_t h = 0; h < m.hidden; ++h )
  {
    double a = m.b1[h];
    double const* row = m.w1.data() + static_cast<size_t>( h ) * d;
    for ( uint32_t i = 0; i < d; ++i )
      a += row[i] * x[i];
    act[h] = a > 0.0 ? a : 0.0;
    y += m.w2[h] * act[h];
  }
  double const err = y - label;
  double const dy = 2.0 * err;

  g.w1.assign( m.w1.size(), 0.0 );
  g.b1.assign( m.hidden, 0.0 );
  g.w2.assign( m.hidden, 0.0 );
  g.b2 = dy;
  for ( uint32_t h = 0; h < m.hidden; ++h )
  {
    g.w2[h] = dy * act[h];
    if ( act[h] > 0.0 )
    {
      double const dh = dy * m.w2[h];
      g.b1[h] = dh;
      double* grow = g.w1.data() + static_cast<size_t>( h ) * d;
      for ( uint32_t i = 0; i < d; ++i )
        grow[i] = dh * x[i];
    }
  }
  return err * err;
}

/*! \brief Hyperparameters of context-model training */
struct context_fit_config
{
  uint32_t context_length{ 8 };
  uint32_t hidden{ 64 };
  uint32_t epochs{ 50 };
  double learning_rate{ 0.05 };
  uint32_t batch{ 32 };
  uint64_t seed{ 1 };
};

namespace detail
{

struct context_sample
{
  std::vector<double> x;
  double label; //!< normalized delta
};

/*! \brief Expands a trajectory into per-step training contexts (newest first) */
template<typename Fn>
void for_each_context( trajectory const& t, uint32_t context_length, Fn&& fn )
{
  std::vector<metric_vector> states;
  states.push_back( t.initial );
  for ( auto const& s : t.steps )
    states.push_back( s.metrics );
  for ( size_t i = 0; i < t.steps.size(); ++i )
  {
    prediction_context ctx;
    for ( size_t j = 0; j < context_length && j <= i; ++j )
      ctx.past.push_back( states[i - j] );
    fn( ctx, t.steps[i].recipe, states[i], states[i + 1] );
  }
}

} // namespace detail

/*! \brief Trains the context model with mini-batch SGD; deterministic per seed */
inline std::pair<context_model, train_report> fit_context_model( dataset const& train,
                                                                 target_metric target,
                                                                 context_fit_config const& cfg )
{
  if ( cfg.context_length < 1 || cfg.context_length > max_context_length )
    throw error( "context length must lie in 1..20" );
  if ( cfg.hidden < 1 || cfg.batch < 1 || cfg.epochs < 1 || !( cfg.learning_rate > 0.0 ) )
    throw error( "invalid context-model hyperparameters" );

  context_model m;
  m.target = target;
  m.table_hash = train.table_hash;
  m.context_length = cfg.context_length;
  m.hidden = cfg.hidden;

  /* normalization constants over every state appearing in the data */
  {
    std::array<double, 4> sum{}, sq{};
    uint64_t n = 0;
    auto absorb = [&]( metric_vector const& v ) {
      for ( uint32_t k = 0; k < 4; ++k )
      {
        double const x = static_cast<double>( metric_component( v, k ) );
        sum[k] += x;
        sq[k] += x * x;
      }
      ++n;
    };
    for ( auto const& t : train.trajectories )
    {
      absorb( t.initial );
      for ( auto const& s : t.steps )
        absorb( s.metrics );
    }
    if ( n == 0 )
      throw error( "cannot fit on an empty dataset" );
    for ( uint32_t k = 0; k < 4; ++k )
    {
      m.feat_mean[k] = sum[k] / static_cast<double>( n );
      double const var = sq[k] / static_cast<double>( n ) - m.feat_mean[k] * m.feat_mean[k];
      double const sd = var > 0.0 ? std::sqrt( var ) : 0.0;
      m.feat_scale[k] = sd > 1e-9 ? sd : 1.0;
    }
  }

  /* training samples with normalized labels */
  std::vector<detail::context_sample> samples;
  {
    double lsum = 0.0, lsq = 0.0;
    std::vector<std::pair<std::vector<double>, double>> raw;
    for ( auto const& t : train.trajectories )
    {
      detail::for_each_context( t, m.context_length,
                                [&]( prediction_context const& ctx, uint32_t recipe,
                                     metric_vector const& before, metric_vector const& after ) {
                                  double const delta = static_cast<double>(
                                      target_value( after, target ) - target_value( before, target ) );
                                  raw.emplace_back( m.features( recipe, ctx ), delta );
                                  lsum += delta;
                                  lsq += delta * delta;
                                } );
    }
    if ( raw.empty() )
      throw error( "cannot fit on an empty dataset" );
    double const n = static_cast<double>( raw.size() );
    m.label_mean = lsum / n;
    double const var = lsq / n - m.label_mean * m.label_mean;
    double const sd = var > 0.0 ? std::sqrt( var ) : 0.0;
    m.label_scale = sd > 1e-9 ? sd : 1.0;
    samples.reserve( raw.size() );
    for ( auto& [x, delta] : raw )
      samples.push_back( { std::move( x ), ( delta - m.label_mean ) / m.label_scale } );
  }

  /* init: uniform ±1/sqrt(fan-in), biases zero */
  uint32_t const d = m.input_dim();
  rng_stream rng( derive_seed( cfg.seed, { 0x4d4c50ull } ) );
  m.w1.resize( static_cast<size_t>( m.hidden ) * d );
  m.b1.assign( m.hidden, 0.0 );
  m.w2.resize( m.hidden );
  double const s1 = 1.0 / std::sqrt( static_cast<double>( d ) );
  double const s2 = 1.0 / std::sqrt( static_cast<double>( m.hidden ) );
  for ( auto& w : m.w1 )
    w = rng.next_real( -s1, s1 );
  for ( auto& w : m.w2 )
    w = rng.next_real( -s2, s2 );
  m.b2 = 0.0;

  /* mini-batch SGD; the step size anneals exponentially to 1/100 of the
   * initial rate over the epoch budget, which lets late epochs settle close
   * to a minimum instead of bouncing at a constant-rate noise floor */
  std::vector<size_t> order( samples.size() );
  for ( size_t i = 0; i < order.size(); ++i )
    order[i] = i;
  context_gradients g, acc;
  for ( uint32_t epoch = 0; epoch < cfg.epochs; ++epoch )
  {
    double const anneal =
        cfg.epochs > 1 ? std::pow( 1e-2, static_cast<double>( epoch ) / static_cast<double>( cfg.epochs - 1 ) )
                       : 1.0;
    for ( size_t i = order.size(); i > 1; --i )
      std::swap( order[i - 1], order[rng.next_below( i )] );
    for ( size_t begin = 0; begin < order.size(); begin += cfg.batch )
    {
      size_t const end = std::min( begin + cfg.batch, order.size() );
      acc.w1.assign( m.w1.size(), 0.0 );
      acc.b1.assign( m.hidden, 0.0 );
      acc.w2.assign( m.hidden, 0.0 );
      acc.b2 = 0.0;
      for ( size_t i = begin; i < end; ++i )
      {
        auto const& s = samples[order[i]];
        loss_and_gradient( m, s.x, s.label, g );
        for ( size_t k = 0; k < acc.w1.size(); ++k )
          acc.w1[k] += g.w1[k];
        for ( uint32_t h = 0; h < m.hidden; ++h )
        {
          acc.b1[h] += g.b1[h];
          acc.w2[h] += g.w2[h];
        }
        acc.b2 += g.b2;
      }
      double scale = cfg.learning_rate * anneal / static_cast<double>( end - begin );
      /* clip the batch-mean gradient norm at 100 so aggressive initial rates
       * cannot blow the weights up */
      {
        double norm2 = acc.b2 * acc.b2;
        for ( double v : acc.w1 )
          norm2 += v * v;
        for ( double v : acc.b1 )
          norm2 += v * v;
        for ( double v : acc.w2 )
          norm2 += v * v;
        double const batch = static_cast<double>( end - begin );
        double const norm = std::sqrt( norm2 ) / batch;
        if ( norm > 100.0 )
          scale *= 100.0 / norm;
      }
      for ( size_t k = 0; k < m.w1.size(); ++k )
        m.w1[k] -= scale * acc.w1[k];
      for ( uint32_t h = 0; h < m.hidden; ++h )
      {
        m.b1[h] -= scale * acc.b1[h];
        m.w2[h] -= scale * acc.w2[h];
      }
      m.b2 -= scale * acc.b2;
    }
  }

  /* report the final training error in target units */
  double se = 0.0;
  for ( auto const& s : samples )
  {
    double const err = ( m.forward( s.x ) - s.label ) * m.label_scale;
    se += err * err;
  }
  train_report report;
  report.rmse = std::sqrt( se / static_cast<double>( samples.size() ) );
  report.samples = samples.size();
  report.hyper = "context=" + std::to_string( cfg.context_length ) + " hidden=" + std::to_string( cfg.hidden ) +
                 " epochs=" + std::to_string( cfg.epochs ) + " lr=" + std::to_string( cfg.learning_rate ) +
                 " batch=" + std::to_string( cfg.batch ) + " seed=" + std::to_string( cfg.seed );
  return { std::move( m ), std::move( report ) };
}

/* ------------------------------------------------------------------ */
/* validation                                                          */
/* ------------------------------------------------------------------ */

/*! \brief RMSE of predicted absolute next size over every step of a dataset */
inline train_report evaluate_rmse( stat_model_1sa const& m, dataset const& valid )
{
  double se = 0.0;
  uint64_t n = 0;
  for ( auto const& t : valid.trajectories )
  {
    int64_t prev = target_value( t.initial, m.target );
    for ( auto const& s : t.steps )
    {
      int64_t const cur = target_value( s.metrics, m.target );
      double const pred = static_cast<double>( prev ) + m.delta_for( s.recipe );
      se += ( pred - static_cast<double>( cur ) ) * ( pred - static_cast<double>( cur ) );
      ++n;
      prev = cur;
    }
  }
  if ( n == 0 )
    throw error( "cannot evaluate on an empty dataset" );
  return { std::sqrt( se / static_cast<double>( n ) ), n, "statistical_1sa" };
}

/*! \brief RMSE over overlapping two-step windows */
inline train_report evaluate_rmse( stat_model_2sa const& m, dataset const& valid )
{
  double se = 0.0;
  uint64_t n = 0;
  for ( auto const& t : valid.trajectories )
  {
    for ( size_t i = 0; i + 1 < t.steps.size(); ++i )
    {
      int64_t const before = i == 0 ? target_value( t.initial, m.target )
                                    : target_value( t.steps[i - 1].metrics, m.target );
      int64_t const after = target_value( t.steps[i + 1].metrics, m.target );
      double const pred = static_cast<double>( before ) +
                          m.delta_for( t.steps[i].recipe, t.steps[i + 1].recipe );
      se += ( pred - static_cast<double>( after ) ) * ( pred - static_cast<double>( after ) );
      ++n;
    }
  }
  if ( n == 0 )
    throw error( "cannot evaluate on an empty dataset" );
  return { std::sqrt( se / static_cast<double>( n ) ), n, "statistical_2sa" };
}

/*! \brief RMSE of the context model, rebuilding each step's history window */
inline train_report evaluate_rmse( context_model const& m, dataset const& valid )
{
  double se = 0.0;
  uint64_t n = 0;
  for ( auto const& t : valid.trajectories )
  {
    detail::for_each_context( t, m.context_length,
                              [&]( prediction_context const& ctx, uint32_t recipe,
                                   metric_vector const& before, metric_vector const& after ) {
                                double const pred = static_cast<double>( target_value( before, m.target ) ) +
                                                    m.predict_delta( recipe, ctx );
                                double const act = static_cast<double>( target_value( after, m.target ) );
                                se += ( pred - act ) * ( pred - act );
                                ++n;
                              } );
  }
  if ( n == 0 )
    throw error( "cannot evaluate on an empty dataset" );
  return { std::sqrt( se / static_cast<double>( n ) ), n, "context" };
}

/* ------------------------------------------------------------------ */
/* serialization                                                       */
/* ------------------------------------------------------------------ */

using prediction_model = std::variant<stat_model_1sa, stat_model_2sa, context_model>;

inline train_report evaluate_rmse( prediction_model const& m, dataset const& valid )
{
  return std::visit( [&]( auto const& model ) { return evaluate_rmse( model, valid ); }, m );
}

inline target_metric model_target( prediction_model const& m )
{
  return std::visit( []( auto const& model ) { return model.target; }, m );
}

inline uint64_t model_table_hash( prediction_model const& m )
{
  return std::visit( []( auto const& model ) { return model.table_hash; }, m );
}

namespace detail
{

inline nlohmann::ordered_json stat1_to_json( stat_model_1sa const& m )
{
  nlohmann::ordered_json j;
  j["kind"] = "statistical_1sa";
  j["target"] = to_string( m.target );
  j["recipe_table_hash"] = to_hex( m.table_hash );
  j["mean_delta"] = m.mean_delta;
  j["count"] = m.count;
  j["fallback"] = m.fallback;
  j["total_count"] = m.total_count;
  return j;
}

inline stat_model_1sa stat1_from_json( nlohmann::json const& j )
{
  stat_model_1sa m;
  m.target = parse_target_metric( j.at( "target" ).get<std::string>() );
  m.table_hash = std::stoull( j.at( "recipe_table_hash" ).get<std::string>(), nullptr, 16 );
  auto md = j.at( "mean_delta" ).get<std::vector<double>>();
  auto ct = j.at( "count" ).get<std::vector<uint64_t>>();
  if ( md.size() != num_recipes || ct.size() != num_recipes )
    throw parse_error( "one-step table must have exactly 30 entries" );
  std::copy( md.begin(), md.end(), m.mean_delta.begin() );
  std::copy( ct.begin(), ct.end(), m.count.begin() );
  m.fallback = j.at( "fallback" ).get<double>();
  m.total_count = j.at( "total_count" ).get<uint64_t>();
  return m;
}

} // namespace detail

/*! \brief Serializes any model as a self-describing JSON document */
inline std::string write_model( prediction_model const& model )
{
  nlohmann::ordered_json j = std::visit(
      []( auto const& m ) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype( m )>;
        if constexpr ( std::is_same_v<T, stat_model_1sa> )
        {
          return detail::stat1_to_json( m );
        }
        else if constexpr ( std::is_same_v<T, stat_model_2sa> )
        {
          nlohmann::ordered_json j;
          j["kind"] = "statistical_2sa";
          j["target"] = to_string( m.target );
          j["recipe_table_hash"] = to_hex( m.table_hash );
          j["pair_mean"] = m.pair_mean;
          j["pair_count"] = m.pair_count;
          j["one"] = detail::stat1_to_json( m.one );
          return j;
        }
        else
        {
          nlohmann::ordered_json j;
          j["kind"] = "context_1sa";
          j["target"] = to_string( m.target );
          j["recipe_table_hash"] = to_hex( m.table_hash );
          j["context_length"] = m.context_length;
          j["hidden"] = m.hidden;
          j["feat_mean"] = m.feat_mean;
          j["feat_scale"] = m.feat_scale;
          j["label_mean"] = m.label_mean;
          j["label_scale"] = m.label_scale;
          j["w1"] = m.w1;
          j["b1"] = m.b1;
          j["w2"] = m.w2;
          j["b2"] = m.b2;
          return j;
        }
      },
      model );
  return j.dump() + "\n";
}

/*! \brief Parses a model document; throws parse_error on malformed input */
inline prediction_model read_model( std::string const& text )
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( std::string( "invalid model document: " ) + e.what() );
  }
  try
  {
    auto const kind = j.at( "kind" ).get<std::string>();
    if ( kind == "statistical_1sa" )
    {
      return detail::stat1_from_json( j );
    }
    if ( kind == "statistical_2sa" )
    {
      stat_model_2sa m;
      m.target = parse_target_metric( j.at( "target" ).get<std::string>() );
      m.table_hash = std::stoull( j.at( "recipe_table_hash" ).get<std::string>(), nullptr, 16 );
      m.pair_mean = j.at( "pair_mean" ).get<std::vector<double>>();
      m.pair_count = j.at( "pair_count" ).get<std::vector<uint64_t>>();
      if ( m.pair_mean.size() != num_recipes * num_recipes ||
           m.pair_count.size() != num_recipes * num_recipes )
        throw parse_error( "pair table must have exactly 900 entries" );
      m.one = detail::stat1_from_json( j.at( "one" ) );
      return m;
    }
    if ( kind == "context_1sa" )
    {
      context_model m;
      m.target = parse_target_metric( j.at( "target" ).get<std::string>() );
      m.table_hash = std::stoull( j.at( "recipe_table_hash" ).get<std::string>(), nullptr, 16 );
      m.context_length = j.at( "context_length" ).get<uint32_t>();
      m.hidden = j.at( "hidden" ).get<uint32_t>();
      if ( m.context_length < 1 || m.context_length > max_context_length )
        throw parse_error( "context length out of range" );
      auto fm = j.at( "feat_mean" ).get<std::vector<double>>();
      auto fs = j.at( "feat_scale" ).get<std::vector<double>>();
      if ( fm.size() != 4 || fs.size() != 4 )
        throw parse_error( "normalization constants must have 4 entries" );
      std::copy( fm.begin(), fm.end(), m.feat_mean.begin() );
      std::copy( fs.begin(), fs.end(), m.feat_scale.begin() );
      m.label_mean = j.at( "label_mean" ).get<double>();
      m.label_scale = j.at( "label_scale" ).get<double>();
      m.w1 = j.at( "w1" ).get<std::vector<double>>();
      m.b1 = j.at( "b1" ).get<std::vector<double>>();
      m.w2 = j.at( "w2" ).get<std::vector<double>>();
      m.b2 = j.at( "b2" ).get<double>();
      if ( m.w1.size() != static_cast<size_t>( m.hidden ) * m.input_dim() ||
           m.b1.size() != m.hidden || m.w2.size() != m.hidden )
        throw parse_error( "weight shapes inconsistent with (context, hidden)" );
      return m;
    }
    throw parse_error( "unknown model kind: " + kind );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( std::string( "incomplete model document: " ) + e.what() );
  }
}

} // namespace migdse
