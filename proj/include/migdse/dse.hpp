/*!
  \file dse.hpp
  \brief The search engine: runs, iterations, parallel chains and restart selection

  One *chain* applies a sequence of recipes sampled by the policy, tracking
  the best state it visits. One *iteration* launches several chains from a
  common start and then restarts everything from the best state any of them
  found (inter-iteration selection). One *run* executes a configured number
  of such iterations. Experiments repeat independent runs, optionally across
  worker threads.

  Every random stream is derived positionally from (seed, run, iteration,
  chain) — never from wall time or scheduling — so a result is a pure
  function of the configuration; serial and multi-threaded execution produce
  identical output byte for byte.
*/

#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "common.hpp"
#include "env.hpp"
#include "metrics.hpp"
#include "pom.hpp"
#include "prm.hpp"
#include "trajectory.hpp"

namespace migdse
{

/*! \brief Full configuration of one exploration experiment */
struct dse_config
{
  uint32_t runs{ 1 };
  uint32_t num_iterations{ 1 };
  uint32_t num_chains{ 1 };
  uint32_t chain_length{ 50 };
  policy_config policy{};
  target_metric target{ target_metric::transistors };
  uint64_t seed{ 1 };

  void validate() const
  {
    if ( runs < 1 || num_iterations < 1 || num_chains < 1 )
      throw error( "runs, iterations and chains must all be at least 1" );
  }
};

/*! \brief Outcome of one chain: its trace and the best state it visited */
template<typename Snapshot>
struct chain_result
{
  std::vector<step_record> trace;
  Snapshot final_state;
  Snapshot best_state;
  metric_vector best_metrics;
  int64_t best_value{ 0 }; //!< min of the target over start state and trace
};

/*! \brief Outcome of one run: global best plus per-chain trajectories */
template<typename Snapshot>
struct run_result
{
  uint64_t run_id{ 0 };
  Snapshot best_state;
  metric_vector best_metrics;
  int64_t best_value{ 0 };
  std::vector<trajectory> trajectories;     //!< one per (iteration, chain), in order
  std::vector<uint32_t> selected_chains;    //!< per-iteration restart choice
};

/*! \brief Runs one chain of `chain_length` recipe applications.
 *
 * Two-step plans commit both recipes before the next prediction; a final
 * pair is truncated to fit the budget exactly.
 */
template<environment E>
chain_result<typename E::snapshot_type> run_chain( E& env, typename E::snapshot_type const& start,
                                                   uint32_t chain_length, policy_config const& policy,
                                                   prediction_model const* model, target_metric target,
                                                   rng_stream& rng, uint64_t run_id = 0,
                                                   uint64_t iteration = 0, uint64_t chain_id = 0 )
{
  env.restore( start );
  chain_result<typename E::snapshot_type> result;
  auto metrics = env.current_metrics();
  result.best_state = env.snapshot();
  result.best_metrics = metrics;
  result.best_value = target_value( metrics, target );

  prediction_context ctx;
  ctx.past.push_back( metrics );

  uint32_t step = 0;
  while ( step < chain_length )
  {
    auto const plan = select_step( policy, model, ctx, rng );
    for ( auto recipe : plan )
    {
      if ( step >= chain_length )
        break;
      env.apply( recipe );
      metrics = env.current_metrics();
      result.trace.push_back( { run_id, iteration, chain_id, step, recipe, metrics } );
      ctx.past.insert( ctx.past.begin(), metrics );
      if ( ctx.past.size() > max_context_length )
        ctx.past.pop_back();
      int64_t const value = target_value( metrics, target );
      if ( value < result.best_value )
      {
        result.best_value = value;
        result.best_metrics = metrics;
        result.best_state = env.snapshot();
      }
      ++step;
    }
  }
  result.final_state = env.snapshot();
  return result;
}

/*! \brief Index of the chain with minimal best value; ties go to the lowest id */
template<typename Snapshot>
uint32_t iism_select( std::vector<chain_result<Snapshot>> const& chains )
{
  if ( chains.empty() )
    throw error( "selection over zero chains" );
  uint32_t best = 0;
  for ( uint32_t i = 1; i < chains.size(); ++i )
  {
    if ( chains[i].best_value < chains[best].best_value )
      best = i;
  }
  return best;
}

/*! \brief One run: iterations of parallel chains with restart from the best */
template<environment E>
run_result<typename E::snapshot_type> run_iterated( E env, dse_config const& cfg,
                                                    prediction_model const* model, uint64_t run_id )
{
  cfg.validate();
  run_result<typename E::snapshot_type> result;
  result.run_id = run_id;

  auto current = env.snapshot();
  result.best_state = current;
  {
    env.restore( current );
    result.best_metrics = env.current_metrics();
    result.best_value = target_value( result.best_metrics, cfg.target );
  }

  for ( uint32_t iter = 0; iter < cfg.num_iterations; ++iter )
  {
    env.restore( current );
    auto const start_metrics = env.current_metrics();
    std::vector<chain_result<typename E::snapshot_type>> chains;
    chains.reserve( cfg.num_chains );
    for ( uint32_t chain = 0; chain < cfg.num_chains; ++chain )
    {
      rng_stream rng( derive_seed( cfg.seed, { run_id, iter, chain } ) );
      env.reseed( derive_seed( cfg.seed, { run_id, iter, chain, 0x454e56ull } ) );
      chains.push_back( run_chain( env, current, cfg.chain_length, cfg.policy, model, cfg.target,
                                   rng, run_id, iter, chain ) );
    }
    uint32_t const selected = iism_select( chains );
    result.selected_chains.push_back( selected );
    for ( auto& c : chains )
    {
      trajectory t;
      t.initial = start_metrics;
      t.steps = std::move( c.trace );
      result.trajectories.push_back( std::move( t ) );
    }
    if ( chains[selected].best_value < result.best_value )
    {
      result.best_value = chains[selected].best_value;
      result.best_metrics = chains[selected].best_metrics;
      result.best_state = chains[selected].best_state;
    }
    current = result.best_state;
  }
  return result;
}

/*! \brief Independent runs, partitioned over `jobs` worker threads.
 *
 * Each worker copies the environment prototype; results land in
 * preallocated slots, so the output is independent of scheduling.
 */
template<environment E>
std::vector<run_result<typename E::snapshot_type>> run_experiment( E const& prototype,
                                                                   dse_config const& cfg,
                                                                   prediction_model const* model,
                                                                   uint32_t jobs = 1 )
{
  cfg.validate();
  std::vector<run_result<typename E::snapshot_type>> results( cfg.runs );
  if ( jobs <= 1 || cfg.runs <= 1 )
  {
    for ( uint32_t r = 0; r < cfg.runs; ++r )
    {
      results[r] = run_iterated( prototype, cfg, model, r );
    }
    return results;
  }

  uint32_t const workers = std::min( jobs, cfg.runs );
  std::vector<std::thread> pool;
  pool.reserve( workers );
  for ( uint32_t w = 0; w < workers; ++w )
  {
    pool.emplace_back( [&, w]() {
      for ( uint32_t r = w; r < cfg.runs; r += workers )
      {
        results[r] = run_iterated( prototype, cfg, model, r );
      }
    } );
  }
  for ( auto& t : pool )
    t.join();
  return results;
}

/*! \brief Flattens a run's trajectories into one step-record list */
template<typename Snapshot>
std::vector<step_record> flatten_trace( run_result<Snapshot> const& r )
{
  std::vector<step_record> out;
  for ( auto const& t : r.trajectories )
    out.insert( out.end(), t.steps.begin(), t.steps.end() );
  return out;
}

/*! \brief Collects all runs' trajectories into a dataset with provenance */
template<typename Snapshot>
dataset collect_dataset( std::vector<run_result<Snapshot>> const& results, std::string benchmark,
                         metric_vector const& initial, uint64_t seed )
{
  dataset d;
  d.benchmark = std::move( benchmark );
  d.table_hash = recipe_table_hash();
  d.seed = seed;
  d.initial = initial;
  for ( auto const& r : results )
    for ( auto const& t : r.trajectories )
      d.trajectories.push_back( t );
  return d;
}

} // namespace migdse
