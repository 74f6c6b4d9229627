/*!
  \file eval.hpp
  \brief Evaluation quantities: success fractions, speedups, sweeps, grids

  A method's *speed* toward a target quality is operationalized as the
  fraction of its independent runs whose best value reaches the target within
  the step budget (the geometric-trials reading of "expected runs until
  success"). *Speedup* is the ratio of a method's fraction to the uniform
  baseline's fraction on the same setup. Wilson score intervals (z = 1.96)
  accompany every fraction so that ratios of noisy fractions can be judged.

  `temperature_sweep` tabulates speedup across softmax temperatures with the
  uniform baseline reported as the T = inf row; `iism_grid` tabulates best
  values across (chain length × chain count) cells under a fixed total step
  budget, varying the number of runs to keep the budget constant.
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"
#include "dse.hpp"

namespace migdse
{

/*! \brief Wilson score interval for a binomial fraction */
struct wilson_interval
{
  double low{ 0.0 };
  double high{ 0.0 };
};

inline wilson_interval wilson( uint64_t successes, uint64_t trials, double z = 1.96 )
{
  if ( trials == 0 )
    throw error( "Wilson interval of zero trials" );
  if ( successes > trials )
    throw error( "Wilson interval with more successes than trials" );
  double const n = static_cast<double>( trials );
  double const p = static_cast<double>( successes ) / n;
  double const z2 = z * z;
  double const denom = 1.0 + z2 / n;
  double const center = ( p + z2 / ( 2.0 * n ) ) / denom;
  double const half = ( z / denom ) * std::sqrt( p * ( 1.0 - p ) / n + z2 / ( 4.0 * n * n ) );
  return { std::max( 0.0, center - half ), std::min( 1.0, center + half ) };
}

/*! \brief Fraction of best values that reach (≤) the target */
inline double success_fraction( std::vector<int64_t> const& bests, int64_t target )
{
  if ( bests.empty() )
    throw error( "success fraction of zero runs" );
  uint64_t hits = 0;
  for ( auto b : bests )
    if ( b <= target )
      ++hits;
  return static_cast<double>( hits ) / static_cast<double>( bests.size() );
}

template<typename Snapshot>
std::vector<int64_t> best_values( std::vector<run_result<Snapshot>> const& results )
{
  std::vector<int64_t> out;
  out.reserve( results.size() );
  for ( auto const& r : results )
    out.push_back( r.best_value );
  return out;
}

template<typename Snapshot>
double success_fraction( std::vector<run_result<Snapshot>> const& results, int64_t target )
{
  return success_fraction( best_values( results ), target );
}

/*! \brief Method-vs-baseline comparison at one target value */
struct speedup_report
{
  int64_t target{ 0 };
  double method_fraction{ 0.0 };
  double baseline_fraction{ 0.0 };
  double ratio{ 0.0 };
  uint64_t method_runs{ 0 };
  uint64_t baseline_runs{ 0 };
  wilson_interval method_interval;
  wilson_interval baseline_interval;
};

/*! \brief Ratio of success fractions; requires a nonzero baseline fraction */
inline speedup_report speedup( std::vector<int64_t> const& method, std::vector<int64_t> const& baseline,
                               int64_t target )
{
  speedup_report r;
  r.target = target;
  r.method_fraction = success_fraction( method, target );
  r.baseline_fraction = success_fraction( baseline, target );
  if ( r.baseline_fraction <= 0.0 )
    throw error( "speedup undefined: baseline never reaches the target" );
  r.ratio = r.method_fraction / r.baseline_fraction;
  r.method_runs = method.size();
  r.baseline_runs = baseline.size();
  auto hits = []( std::vector<int64_t> const& v, int64_t t ) {
    return static_cast<uint64_t>( std::count_if( v.begin(), v.end(), [&]( int64_t b ) { return b <= t; } ) );
  };
  r.method_interval = wilson( hits( method, target ), method.size() );
  r.baseline_interval = wilson( hits( baseline, target ), baseline.size() );
  return r;
}

template<typename Snapshot>
speedup_report speedup( std::vector<run_result<Snapshot>> const& method,
                        std::vector<run_result<Snapshot>> const& baseline, int64_t target )
{
  return speedup( best_values( method ), best_values( baseline ), target );
}

/* ------------------------------------------------------------------ */
/* temperature sweep                                                   */
/* ------------------------------------------------------------------ */

/*! \brief One (temperature, target) entry of a sweep table */
struct sweep_row
{
  std::string temperature; //!< decimal value, or "inf" for the uniform baseline
  int64_t target{ 0 };
  double fraction{ 0.0 };
  double ratio{ 0.0 }; //!< speedup vs the uniform baseline
  uint64_t runs{ 0 };
  wilson_interval interval;
};

/*! \brief Decimal rendering without trailing zeros (e.g. 0.5, 2, 20) */
inline std::string format_temperature( double t )
{
  std::string s = std::to_string( t );
  while ( !s.empty() && s.back() == '0' )
    s.pop_back();
  if ( !s.empty() && s.back() == '.' )
    s.pop_back();
  return s;
}

/*! \brief Runs the guided configuration at each temperature against one
 * shared uniform baseline; the baseline itself is reported as T = inf.
 */
template<environment E>
std::vector<sweep_row> temperature_sweep( E const& prototype, dse_config const& base,
                                          prediction_model const* model,
                                          std::vector<double> const& temperatures,
                                          std::vector<int64_t> const& targets, uint32_t jobs = 1 )
{
  if ( base.policy.mode == policy_mode::uniform )
    throw error( "temperature sweep needs a guided policy configuration" );

  dse_config uniform_cfg = base;
  uniform_cfg.policy = { policy_mode::uniform, 1.0 };
  auto const baseline = best_values( run_experiment( prototype, uniform_cfg, nullptr, jobs ) );

  std::vector<sweep_row> rows;
  for ( double t : temperatures )
  {
    dse_config cfg = base;
    cfg.policy.temperature = t;
    auto const bests = best_values( run_experiment( prototype, cfg, model, jobs ) );
    for ( auto target : targets )
    {
      sweep_row row;
      row.temperature = format_temperature( t );
      row.target = target;
      row.fraction = success_fraction( bests, target );
      double const bf = success_fraction( baseline, target );
      row.ratio = bf > 0.0 ? row.fraction / bf : 0.0;
      row.runs = bests.size();
      uint64_t hits = 0;
      for ( auto b : bests )
        if ( b <= target )
          ++hits;
      row.interval = wilson( hits, bests.size() );
      rows.push_back( std::move( row ) );
    }
  }
  for ( auto target : targets )
  {
    sweep_row row;
    row.temperature = "inf";
    row.target = target;
    row.fraction = success_fraction( baseline, target );
    row.ratio = row.fraction > 0.0 ? 1.0 : 0.0;
    row.runs = baseline.size();
    uint64_t hits = 0;
    for ( auto b : baseline )
      if ( b <= target )
        ++hits;
    row.interval = wilson( hits, baseline.size() );
    rows.push_back( std::move( row ) );
  }
  return rows;
}

/* ------------------------------------------------------------------ */
/* restart-structure grid                                              */
/* ------------------------------------------------------------------ */

/*! \brief One (chain length × chain count) cell under a fixed step budget */
struct grid_cell
{
  uint32_t chain_length{ 0 };
  uint32_t chains{ 0 };
  uint32_t runs{ 0 }; //!< floor(budget / (chains · length · iterations))
  int64_t min{ 0 };
  double mean{ 0.0 };
  double median{ 0.0 };
};

/*! \brief Evaluates every grid cell whose run count is nonzero.
 *
 * Cells keep the configured iteration count; the number of runs absorbs the
 * budget: runs = ⌊budget / (chains · chain_length · iterations)⌋. Cells that
 * cannot afford a single run are omitted from the result.
 */
template<environment E>
std::vector<grid_cell> iism_grid( E const& prototype, dse_config const& base,
                                  prediction_model const* model, uint64_t step_budget,
                                  std::vector<uint32_t> const& chain_lengths,
                                  std::vector<uint32_t> const& chain_counts, uint32_t jobs = 1 )
{
  std::vector<grid_cell> cells;
  for ( auto length : chain_lengths )
  {
    for ( auto chains : chain_counts )
    {
      uint64_t const per_run =
          static_cast<uint64_t>( chains ) * length * std::max<uint32_t>( 1, base.num_iterations );
      uint32_t const runs = per_run == 0 ? 0 : static_cast<uint32_t>( step_budget / per_run );
      if ( runs == 0 )
        continue;
      dse_config cfg = base;
      cfg.chain_length = length;
      cfg.num_chains = chains;
      cfg.runs = runs;
      auto bests = best_values( run_experiment( prototype, cfg, model, jobs ) );
      grid_cell cell;
      cell.chain_length = length;
      cell.chains = chains;
      cell.runs = runs;
      cell.min = *std::min_element( bests.begin(), bests.end() );
      double sum = 0.0;
      for ( auto b : bests )
        sum += static_cast<double>( b );
      cell.mean = sum / static_cast<double>( bests.size() );
      std::sort( bests.begin(), bests.end() );
      size_t const n = bests.size();
      cell.median = n % 2 ? static_cast<double>( bests[n / 2] )
                          : 0.5 * static_cast<double>( bests[n / 2 - 1] + bests[n / 2] );
      cells.push_back( cell );
    }
  }
  return cells;
}

} // namespace migdse
