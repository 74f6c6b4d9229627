/*!
  \file trajectory.hpp
  \brief Recording, persistence and splitting of exploration trajectories

  A trajectory is the step-by-step record of one optimization chain: the
  metrics of its start state plus, per step, the recipe taken and the metrics
  measured afterwards. Datasets bundle trajectories with provenance (benchmark
  name, recipe-table hash, collection seed) so that trained models can verify
  they are applied to data produced under the same recipe table.

  On disk a dataset is a JSON-lines file: one header object, then one object
  per step with keys exactly `run, iter, chain, step, recipe, mig_nodes,
  depth, lut6, transistors` in that order. Writing is hand-formatted to keep
  the byte layout canonical; reading accepts any JSON object per line.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "metrics.hpp"
#include "recipes.hpp"

namespace migdse
{

/*! \brief One optimization step: recipe taken and the metrics after it */
struct step_record
{
  uint64_t run{ 0 };
  uint64_t iter{ 0 };
  uint64_t chain{ 0 };
  uint64_t step{ 0 }; //!< 0-based position within the chain
  uint32_t recipe{ 0 };
  metric_vector metrics; //!< state after applying the recipe

  bool operator==( step_record const& other ) const = default;
};

/*! \brief One chain's record: start-state metrics plus its ordered steps */
struct trajectory
{
  metric_vector initial;
  std::vector<step_record> steps;

  bool operator==( trajectory const& other ) const = default;
};

/*! \brief Trajectories plus the provenance needed to reuse them */
struct dataset
{
  std::string benchmark;
  uint64_t table_hash{ 0 }; //!< recipe-table hash at collection time
  uint64_t seed{ 0 };
  metric_vector initial; //!< benchmark baseline metrics
  std::vector<trajectory> trajectories;

  bool operator==( dataset const& other ) const = default;
};

namespace detail
{

inline std::string metrics_fields( metric_vector const& v )
{
  return "\"mig_nodes\":" + std::to_string( v.mig_nodes ) + ",\"depth\":" + std::to_string( v.depth ) +
         ",\"lut6\":" + std::to_string( v.lut6 ) + ",\"transistors\":" + std::to_string( v.transistors );
}

inline std::string json_escape( std::string const& s )
{
  std::string out;
  for ( char c : s )
  {
    switch ( c )
    {
    case '"':
      out += "\\\"";
      break;
    case '\\':
      out += "\\\\";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\t':
      out += "\\t";
      break;
    case '\r':
      out += "\\r";
      break;
    default:
      out += c;
    }
  }
  return out;
}

inline metric_vector metrics_from_json( nlohmann::json const& j )
{
  metric_vector v;
  v.mig_nodes = j.at( "mig_nodes" ).get<int64_t>();
  v.depth = j.at( "depth" ).get<int64_t>();
  v.lut6 = j.at( "lut6" ).get<int64_t>();
  v.transistors = j.at( "transistors" ).get<int64_t>();
  return v;
}

} // namespace detail

/*! \brief Serializes a dataset as one header line plus one line per step */
inline void write_jsonl( dataset const& d, std::ostream& os )
{
  os << "{\"benchmark\":\"" << detail::json_escape( d.benchmark ) << "\",\"recipe_table_hash\":\""
     << to_hex( d.table_hash ) << "\",\"seed\":" << d.seed << ",\"initial\":{"
     << detail::metrics_fields( d.initial ) << "}";
  /* per-trajectory start states that differ from the baseline (restarts) */
  std::string starts;
  for ( auto const& t : d.trajectories )
  {
    if ( t.initial == d.initial || t.steps.empty() )
      continue;
    if ( !starts.empty() )
      starts += ",";
    auto const& s0 = t.steps.front();
    starts += "{\"run\":" + std::to_string( s0.run ) + ",\"iter\":" + std::to_string( s0.iter ) +
              ",\"chain\":" + std::to_string( s0.chain ) + "," + detail::metrics_fields( t.initial ) + "}";
  }
  if ( !starts.empty() )
    os << ",\"starts\":[" << starts << "]";
  os << "}\n";

  for ( auto const& t : d.trajectories )
  {
    for ( auto const& s : t.steps )
    {
      os << "{\"run\":" << s.run << ",\"iter\":" << s.iter << ",\"chain\":" << s.chain
         << ",\"step\":" << s.step << ",\"recipe\":" << s.recipe << ","
         << detail::metrics_fields( s.metrics ) << "}\n";
    }
  }
}

inline std::string write_jsonl( dataset const& d )
{
  std::ostringstream os;
  write_jsonl( d, os );
  return os.str();
}

/*! \brief Parses a dataset; appends a warning if the recipe table changed */
inline dataset read_jsonl( std::istream& is, std::vector<std::string>* warnings = nullptr )
{
  dataset d;
  std::string line;
  uint64_t line_no = 0;

  /* header */
  if ( !std::getline( is, line ) )
    throw parse_error( "missing dataset header line" );
  ++line_no;
  nlohmann::json hdr;
  try
  {
    hdr = nlohmann::json::parse( line );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw parse_error( std::string( "invalid header: " ) + e.what(), line_no );
  }
  try
  {
    d.benchmark = hdr.at( "benchmark" ).get<std::string>();
    d.table_hash = std::stoull( hdr.at( "recipe_table_hash" ).get<std::string>(), nullptr, 16 );
    d.seed = hdr.at( "seed" ).get<uint64_t>();
    d.initial = detail::metrics_from_json( hdr.at( "initial" ) );
  }
  catch ( std::exception const& e )
  {
    throw parse_error( std::string( "incomplete header: " ) + e.what(), line_no );
  }
  std::map<std::tuple<uint64_t, uint64_t, uint64_t>, metric_vector> starts;
  if ( hdr.contains( "starts" ) )
  {
    for ( auto const& s : hdr.at( "starts" ) )
    {
      starts[{ s.at( "run" ).get<uint64_t>(), s.at( "iter" ).get<uint64_t>(),
               s.at( "chain" ).get<uint64_t>() }] = detail::metrics_from_json( s );
    }
  }
  if ( warnings && d.table_hash != recipe_table_hash() )
  {
    warnings->push_back( "dataset was collected under recipe table " + to_hex( d.table_hash ) +
                         " but the current table is " + to_hex( recipe_table_hash() ) );
  }

  /* records, grouped by (run, iter, chain) in first-appearance order */
  std::map<std::tuple<uint64_t, uint64_t, uint64_t>, size_t> index;
  while ( std::getline( is, line ) )
  {
    ++line_no;
    if ( line.empty() )
      continue;
    step_record r;
    try
    {
      auto j = nlohmann::json::parse( line );
      r.run = j.at( "run" ).get<uint64_t>();
      r.iter = j.at( "iter" ).get<uint64_t>();
      r.chain = j.at( "chain" ).get<uint64_t>();
      r.step = j.at( "step" ).get<uint64_t>();
      r.recipe = j.at( "recipe" ).get<uint32_t>();
      r.metrics = detail::metrics_from_json( j );
    }
    catch ( std::exception const& e )
    {
      throw parse_error( std::string( "invalid record: " ) + e.what(), line_no );
    }
    if ( r.recipe >= num_recipes )
      throw parse_error( "recipe id out of range: " + std::to_string( r.recipe ), line_no );

    auto key = std::make_tuple( r.run, r.iter, r.chain );
    auto it = index.find( key );
    if ( it == index.end() )
    {
      if ( r.step != 0 )
        throw parse_error( "trajectory does not start at step 0", line_no );
      index.emplace( key, d.trajectories.size() );
      trajectory t;
      auto st = starts.find( key );
      t.initial = st != starts.end() ? st->second : d.initial;
      t.steps.push_back( r );
      d.trajectories.push_back( std::move( t ) );
    }
    else
    {
      auto& t = d.trajectories[it->second];
      if ( r.step != t.steps.back().step + 1 )
        throw parse_error( "non-consecutive step index within trajectory", line_no );
      t.steps.push_back( r );
    }
  }
  return d;
}

inline dataset read_jsonl( std::string const& text, std::vector<std::string>* warnings = nullptr )
{
  std::istringstream is( text );
  return read_jsonl( is, warnings );
}

/*! \brief Splits by whole runs: no run straddles train and validation */
inline std::pair<dataset, dataset> split_dataset( dataset const& d, double validation_fraction,
                                                  uint64_t seed )
{
  if ( !( validation_fraction > 0.0 && validation_fraction < 1.0 ) )
    throw error( "validation fraction must lie strictly between 0 and 1" );

  std::vector<uint64_t> runs;
  for ( auto const& t : d.trajectories )
  {
    if ( t.steps.empty() )
      continue;
    uint64_t run = t.steps.front().run;
    if ( std::find( runs.begin(), runs.end(), run ) == runs.end() )
      runs.push_back( run );
  }
  /* seeded Fisher-Yates, then the first ⌊fraction·runs⌋ (at least one) validate */
  rng_stream rng( derive_seed( seed, { 0x53504c4954ull } ) );
  for ( size_t i = runs.size(); i > 1; --i )
  {
    std::swap( runs[i - 1], runs[rng.next_below( i )] );
  }
  size_t n_valid = runs.empty() ? 0 : std::max<size_t>( 1, static_cast<size_t>( validation_fraction * static_cast<double>( runs.size() ) ) );
  std::vector<uint64_t> valid_runs( runs.begin(), runs.begin() + static_cast<long>( n_valid ) );

  auto in_valid = [&]( uint64_t run ) {
    return std::find( valid_runs.begin(), valid_runs.end(), run ) != valid_runs.end();
  };
  dataset train, valid;
  train.benchmark = valid.benchmark = d.benchmark;
  train.table_hash = valid.table_hash = d.table_hash;
  train.seed = valid.seed = d.seed;
  train.initial = valid.initial = d.initial;
  for ( auto const& t : d.trajectories )
  {
    bool v = !t.steps.empty() && in_valid( t.steps.front().run );
    ( v ? valid : train ).trajectories.push_back( t );
  }
  return { std::move( train ), std::move( valid ) };
}

} // namespace migdse
