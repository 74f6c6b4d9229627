/*!
  \file migdse.cpp
  \brief Command-line entry point: collect, fit, explore, sweep, convert, check

  Every subcommand is a thin wrapper over the header library and is fully
  reproducible from its flags and seed; there is no hidden state. Flags can
  also be supplied through an INI file (`--config`), with command-line flags
  taking precedence. Exit codes: 0 success, 1 domain failure (bad file,
  failed precondition), 2 usage error. `check-equiv` instead maps its verdict
  onto the exit code: 0 equivalent, 1 not equivalent, 2 probably equivalent.
*/

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <migdse/dse.hpp>
#include <migdse/env.hpp>
#include <migdse/eval.hpp>
#include <migdse/io/aiger.hpp>
#include <migdse/io/blif.hpp>
#include <migdse/io/convert.hpp>
#include <migdse/metrics.hpp>
#include <migdse/prm.hpp>
#include <migdse/recipes.hpp>
#include <migdse/report.hpp>
#include <migdse/trajectory.hpp>

namespace
{

/*! \brief Flag-level mistakes that CLI11's validators cannot express */
struct usage_error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

bool log_debug_enabled()
{
  char const* level = std::getenv( "MIGDSE_LOG" );
  return level != nullptr && std::string_view{ level } == "debug";
}

void log_debug( std::string const& message )
{
  if ( log_debug_enabled() )
    std::cerr << "[migdse] " << message << "\n";
}

std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw migdse::error( "cannot open file: " + path );
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file( std::string const& path, std::string const& content )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw migdse::error( "cannot open file for writing: " + path );
  out << content;
  if ( !out )
    throw migdse::error( "write failure: " + path );
}

bool has_extension( std::string const& path, std::string const& ext )
{
  return std::filesystem::path( path ).extension() == ext;
}

migdse::mig load_circuit( std::string const& path )
{
  auto const text = read_file( path );
  if ( has_extension( path, ".aag" ) || has_extension( path, ".aig" ) )
    return migdse::aig_to_mig( migdse::parse_aiger_ascii( text ) );
  if ( has_extension( path, ".blif" ) )
    return migdse::parse_blif( text );
  throw migdse::error( "unknown circuit format (expected .aag or .blif): " + path );
}

void save_circuit( migdse::mig const& m, std::string const& path )
{
  if ( has_extension( path, ".aag" ) || has_extension( path, ".aig" ) )
  {
    write_file( path, migdse::write_aiger_ascii( migdse::mig_to_aig( m ) ) );
    return;
  }
  if ( has_extension( path, ".blif" ) )
  {
    write_file( path, migdse::write_blif( m ) );
    return;
  }
  throw migdse::error( "unknown circuit format (expected .aag or .blif): " + path );
}

std::string benchmark_name( std::string const& path )
{
  return std::filesystem::path( path ).stem().string();
}

migdse::policy_mode parse_mode( std::string const& mode )
{
  if ( mode == "uniform" )
    return migdse::policy_mode::uniform;
  if ( mode == "1sa" )
    return migdse::policy_mode::guided_1sa;
  if ( mode == "2sa" )
    return migdse::policy_mode::guided_2sa;
  throw migdse::error( "unknown policy mode: " + mode );
}

migdse::dataset read_dataset( std::string const& path )
{
  std::vector<std::string> warnings;
  auto d = migdse::read_jsonl( read_file( path ), &warnings );
  for ( auto const& w : warnings )
    std::cerr << "warning: " << w << "\n";
  return d;
}

std::string report_json( std::string const& kind, migdse::target_metric target,
                         migdse::train_report const& report )
{
  return fmt::format( "{{\"kind\":\"{}\",\"target\":\"{}\",\"rmse\":{:.9g},\"samples\":{}{}}}",
                      kind, migdse::to_string( target ), report.rmse, report.samples,
                      report.hyper.empty() ? std::string{}
                                           : fmt::format( ",\"hyper\":\"{}\"", report.hyper ) );
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "majority-inverter-graph design-space exploration" };
  app.set_config( "--config", "", "read flags from an INI file (sections per subcommand)" );
  app.require_subcommand( 1 );

  uint32_t jobs = std::max( 1u, std::thread::hardware_concurrency() );
  app.add_option( "--jobs", jobs, "worker threads (results are independent of this)" )
      ->check( CLI::PositiveNumber );

  std::function<int()> action;

  /* ---------------------------------------------------------------- */
  /* collect                                                           */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "collect", "record uniform-policy trajectories" );
    auto circuit = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto runs = std::make_shared<uint32_t>( 10 );
    auto steps = std::make_shared<uint32_t>( 50 );
    auto seed = std::make_shared<uint64_t>( 1 );
    cmd->add_option( "--circuit", *circuit, "input circuit (.aag or .blif)" )->required();
    cmd->add_option( "--runs", *runs, "independent runs" )->check( CLI::PositiveNumber );
    cmd->add_option( "--steps", *steps, "recipe applications per run" )->check( CLI::PositiveNumber );
    cmd->add_option( "--seed", *seed, "PRNG seed" );
    cmd->add_option( "--out", *out, "output trajectory file (JSON lines)" )->required();
    cmd->callback( [=, &action, &jobs]() {
      action = [=, &jobs]() {
        migdse::mig_environment env{ load_circuit( *circuit ) };
        migdse::dse_config cfg;
        cfg.runs = *runs;
        cfg.num_iterations = 1;
        cfg.num_chains = 1;
        cfg.chain_length = *steps;
        cfg.policy = { migdse::policy_mode::uniform, 1.0 };
        cfg.seed = *seed;
        log_debug( fmt::format( "collect: {} runs x {} steps, jobs={}", *runs, *steps, jobs ) );
        auto const results = migdse::run_experiment( env, cfg, nullptr, jobs );
        auto const data = migdse::collect_dataset( results, benchmark_name( *circuit ),
                                                   env.current_metrics(), *seed );
        write_file( *out, migdse::write_jsonl( data ) );
        std::cout << fmt::format( "wrote {} trajectories ({} records) to {}\n",
                                  data.trajectories.size(),
                                  static_cast<uint64_t>( *runs ) * *steps, *out );
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* fit                                                               */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "fit", "fit a size-prediction model from trajectories" );
    auto data_path = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>( "stat1sa" );
    auto target_name = std::make_shared<std::string>( "transistors" );
    auto valid_frac = std::make_shared<double>( 0.2 );
    auto seed = std::make_shared<uint64_t>( 1 );
    auto fitcfg = std::make_shared<migdse::context_fit_config>();
    cmd->add_option( "--data", *data_path, "trajectory file (JSON lines)" )->required();
    cmd->add_option( "--model", *kind, "model kind" )
        ->check( CLI::IsMember( { "stat1sa", "stat2sa", "context" } ) );
    cmd->add_option( "--target", *target_name, "metric the model predicts" )
        ->check( CLI::IsMember( { "mig_nodes", "depth", "lut6", "transistors" } ) );
    cmd->add_option( "--valid-frac", *valid_frac, "validation split fraction (0 disables)" )
        ->check( CLI::Range( 0.0, 0.9999 ) );
    cmd->add_option( "--seed", *seed, "split / init seed" );
    cmd->add_option( "--out", *out, "output model file (JSON)" )->required();
    cmd->add_option( "--context-length", fitcfg->context_length, "context model: history length" );
    cmd->add_option( "--hidden", fitcfg->hidden, "context model: hidden units" );
    cmd->add_option( "--epochs", fitcfg->epochs, "context model: training epochs" );
    cmd->add_option( "--lr", fitcfg->learning_rate, "context model: learning rate" );
    cmd->add_option( "--batch", fitcfg->batch, "context model: minibatch size" );
    cmd->callback( [=, &action]() {
      action = [=]() {
        auto const data = read_dataset( *data_path );
        auto const target = migdse::parse_target_metric( *target_name );
        migdse::dataset train = data, valid;
        bool const have_valid = *valid_frac > 0.0;
        if ( have_valid )
        {
          auto parts = migdse::split_dataset( data, *valid_frac, *seed );
          train = std::move( parts.first );
          valid = std::move( parts.second );
        }
        migdse::prediction_model model;
        if ( *kind == "stat1sa" )
          model = migdse::fit_statistical_1sa( train, target );
        else if ( *kind == "stat2sa" )
          model = migdse::fit_statistical_2sa( train, target );
        else
        {
          auto cfg = *fitcfg;
          cfg.seed = *seed;
          model = migdse::fit_context_model( train, target, cfg ).first;
        }
        auto const report = migdse::evaluate_rmse( model, have_valid ? valid : train );
        write_file( *out, migdse::write_model( model ) );
        std::cout << report_json( *kind, target, report ) << "\n";
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* explore                                                           */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "explore", "search for a smaller equivalent circuit" );
    auto circuit = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>( "uniform" );
    auto target_name = std::make_shared<std::string>( "mig_nodes" );
    auto temperature = std::make_shared<double>( 5.0 );
    auto runs = std::make_shared<uint32_t>( 1 );
    auto iterations = std::make_shared<uint32_t>( 1 );
    auto chains = std::make_shared<uint32_t>( 1 );
    auto chain_length = std::make_shared<uint32_t>( 50 );
    auto seed = std::make_shared<uint64_t>( 1 );
    auto out_best = std::make_shared<std::string>();
    auto out_traces = std::make_shared<std::string>();
    cmd->add_option( "--circuit", *circuit, "input circuit (.aag or .blif)" )->required();
    cmd->add_option( "--model", *model_path, "prediction model file (guided modes)" );
    cmd->add_option( "--mode", *mode, "policy" )
        ->check( CLI::IsMember( { "uniform", "1sa", "2sa" } ) );
    cmd->add_option( "--target", *target_name, "metric to minimize" )
        ->check( CLI::IsMember( { "mig_nodes", "depth", "lut6", "transistors" } ) );
    cmd->add_option( "--temperature", *temperature, "softmax temperature" )
        ->check( CLI::PositiveNumber );
    cmd->add_option( "--runs", *runs, "independent runs" )->check( CLI::PositiveNumber );
    cmd->add_option( "--iterations", *iterations, "restart rounds per run" )
        ->check( CLI::PositiveNumber );
    cmd->add_option( "--chains", *chains, "parallel chains per iteration" )
        ->check( CLI::PositiveNumber );
    cmd->add_option( "--chain-length", *chain_length, "steps per chain" )
        ->check( CLI::PositiveNumber );
    cmd->add_option( "--seed", *seed, "PRNG seed" );
    cmd->add_option( "--out-best", *out_best, "write the best circuit here (.aag or .blif)" );
    cmd->add_option( "--out-traces", *out_traces, "write all trajectories here (JSON lines)" );
    cmd->callback( [=, &action, &jobs]() {
      action = [=, &jobs]() {
        auto const policy_kind = parse_mode( *mode );
        migdse::prediction_model model;
        bool const guided = policy_kind != migdse::policy_mode::uniform;
        if ( guided )
        {
          if ( model_path->empty() )
            throw usage_error( "guided mode requires --model" );
          model = migdse::read_model( read_file( *model_path ) );
        }
        migdse::mig_environment env{ load_circuit( *circuit ) };
        migdse::dse_config cfg;
        cfg.runs = *runs;
        cfg.num_iterations = *iterations;
        cfg.num_chains = *chains;
        cfg.chain_length = *chain_length;
        cfg.policy = { policy_kind, *temperature };
        cfg.target = migdse::parse_target_metric( *target_name );
        cfg.seed = *seed;
        log_debug( fmt::format( "explore: mode={} runs={} it={} chains={} len={} jobs={}", *mode,
                                *runs, *iterations, *chains, *chain_length, jobs ) );
        auto const results =
            migdse::run_experiment( env, cfg, guided ? &model : nullptr, jobs );
        size_t best = 0;
        for ( size_t i = 1; i < results.size(); ++i )
          if ( results[i].best_value < results[best].best_value )
            best = i;
        auto const& winner = results[best];
        std::cout << fmt::format( "best (run {}): {}\n", winner.run_id,
                                  migdse::to_string( winner.best_metrics ) );
        if ( !out_best->empty() )
          save_circuit( winner.best_state, *out_best );
        if ( !out_traces->empty() )
        {
          auto const data = migdse::collect_dataset( results, benchmark_name( *circuit ),
                                                     env.current_metrics(), *seed );
          write_file( *out_traces, migdse::write_jsonl( data ) );
        }
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* sweep-temperature                                                 */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "sweep-temperature",
                                    "success fraction and speedup across temperatures" );
    auto circuit = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>( "1sa" );
    auto target_name = std::make_shared<std::string>( "mig_nodes" );
    auto temperatures = std::make_shared<std::vector<double>>( std::vector<double>{ 0.5, 2.0, 5.0, 20.0 } );
    auto targets = std::make_shared<std::vector<int64_t>>();
    auto runs = std::make_shared<uint32_t>( 50 );
    auto iterations = std::make_shared<uint32_t>( 1 );
    auto chains = std::make_shared<uint32_t>( 1 );
    auto chain_length = std::make_shared<uint32_t>( 50 );
    auto seed = std::make_shared<uint64_t>( 1 );
    auto out_csv = std::make_shared<std::string>();
    auto out_svg = std::make_shared<std::string>();
    cmd->add_option( "--circuit", *circuit, "input circuit (.aag or .blif)" )->required();
    cmd->add_option( "--model", *model_path, "prediction model file" )->required();
    cmd->add_option( "--mode", *mode, "guided policy" )->check( CLI::IsMember( { "1sa", "2sa" } ) );
    cmd->add_option( "--target", *target_name, "metric to minimize" )
        ->check( CLI::IsMember( { "mig_nodes", "depth", "lut6", "transistors" } ) );
    cmd->add_option( "--temperatures", *temperatures, "temperatures to sweep" )
        ->delimiter( ',' );
    cmd->add_option( "--targets", *targets, "target values for success fractions" )
        ->delimiter( ',' )
        ->required();
    cmd->add_option( "--runs", *runs, "runs per temperature" )->check( CLI::PositiveNumber );
    cmd->add_option( "--iterations", *iterations, "restart rounds per run" );
    cmd->add_option( "--chains", *chains, "parallel chains per iteration" );
    cmd->add_option( "--chain-length", *chain_length, "steps per chain" );
    cmd->add_option( "--seed", *seed, "PRNG seed" );
    cmd->add_option( "--out-csv", *out_csv, "sweep table" )->required();
    cmd->add_option( "--out-svg", *out_svg, "speedup chart" );
    cmd->callback( [=, &action, &jobs]() {
      action = [=, &jobs]() {
        auto model = migdse::read_model( read_file( *model_path ) );
        migdse::mig_environment env{ load_circuit( *circuit ) };
        migdse::dse_config base;
        base.runs = *runs;
        base.num_iterations = *iterations;
        base.num_chains = *chains;
        base.chain_length = *chain_length;
        base.policy = { parse_mode( *mode ), 1.0 };
        base.target = migdse::parse_target_metric( *target_name );
        base.seed = *seed;
        auto const rows =
            migdse::temperature_sweep( env, base, &model, *temperatures, *targets, jobs );
        std::ostringstream csv;
        migdse::sweep_to_csv( rows, csv );
        write_file( *out_csv, csv.str() );
        if ( !out_svg->empty() )
          write_file( *out_svg, migdse::sweep_to_svg( rows ) );
        std::cout << fmt::format( "wrote {} sweep rows to {}\n", rows.size(), *out_csv );
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* grid-iism                                                         */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand(
        "grid-iism", "best-value statistics over chain-length x chain-count cells" );
    auto circuit = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>( "uniform" );
    auto target_name = std::make_shared<std::string>( "mig_nodes" );
    auto temperature = std::make_shared<double>( 5.0 );
    auto budget = std::make_shared<uint64_t>();
    auto lengths = std::make_shared<std::vector<uint32_t>>();
    auto counts = std::make_shared<std::vector<uint32_t>>();
    auto iterations = std::make_shared<uint32_t>( 1 );
    auto seed = std::make_shared<uint64_t>( 1 );
    auto out_csv = std::make_shared<std::string>();
    auto out_svg = std::make_shared<std::string>();
    cmd->add_option( "--circuit", *circuit, "input circuit (.aag or .blif)" )->required();
    cmd->add_option( "--model", *model_path, "prediction model file (guided modes)" );
    cmd->add_option( "--mode", *mode, "policy" )
        ->check( CLI::IsMember( { "uniform", "1sa", "2sa" } ) );
    cmd->add_option( "--target", *target_name, "metric to minimize" )
        ->check( CLI::IsMember( { "mig_nodes", "depth", "lut6", "transistors" } ) );
    cmd->add_option( "--temperature", *temperature, "softmax temperature" );
    cmd->add_option( "--budget", *budget, "total steps per cell (runs absorb the budget)" )
        ->required();
    cmd->add_option( "--chain-lengths", *lengths, "chain lengths" )->delimiter( ',' )->required();
    cmd->add_option( "--chains-list", *counts, "chain counts" )->delimiter( ',' )->required();
    cmd->add_option( "--iterations", *iterations, "restart rounds per run" );
    cmd->add_option( "--seed", *seed, "PRNG seed" );
    cmd->add_option( "--out-csv", *out_csv, "grid table" )->required();
    cmd->add_option( "--out-svg", *out_svg, "heatmap" );
    cmd->callback( [=, &action, &jobs]() {
      action = [=, &jobs]() {
        auto const policy_kind = parse_mode( *mode );
        migdse::prediction_model model;
        bool const guided = policy_kind != migdse::policy_mode::uniform;
        if ( guided )
        {
          if ( model_path->empty() )
            throw usage_error( "guided mode requires --model" );
          model = migdse::read_model( read_file( *model_path ) );
        }
        migdse::mig_environment env{ load_circuit( *circuit ) };
        migdse::dse_config base;
        base.num_iterations = *iterations;
        base.policy = { policy_kind, *temperature };
        base.target = migdse::parse_target_metric( *target_name );
        base.seed = *seed;
        auto const cells = migdse::iism_grid( env, base, guided ? &model : nullptr, *budget,
                                              *lengths, *counts, jobs );
        std::ostringstream csv;
        migdse::grid_to_csv( cells, csv );
        write_file( *out_csv, csv.str() );
        if ( !out_svg->empty() && !cells.empty() )
          write_file( *out_svg, migdse::grid_to_svg( cells ) );
        std::cout << fmt::format( "wrote {} grid cells to {}\n", cells.size(), *out_csv );
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* evaluate                                                          */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "evaluate", "model RMSE on a held-out trajectory file" );
    auto data_path = std::make_shared<std::string>();
    auto model_path = std::make_shared<std::string>();
    cmd->add_option( "--data", *data_path, "trajectory file (JSON lines)" )->required();
    cmd->add_option( "--model", *model_path, "model file" )->required();
    cmd->callback( [=, &action]() {
      action = [=]() {
        auto const model = migdse::read_model( read_file( *model_path ) );
        auto const data = read_dataset( *data_path );
        if ( migdse::model_table_hash( model ) != data.table_hash )
          std::cerr << "warning: model and data use different recipe tables\n";
        auto const report = migdse::evaluate_rmse( model, data );
        std::string kind = std::holds_alternative<migdse::stat_model_1sa>( model ) ? "stat1sa"
                           : std::holds_alternative<migdse::stat_model_2sa>( model )
                               ? "stat2sa"
                               : "context";
        std::cout << report_json( kind, migdse::model_target( model ), report ) << "\n";
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* convert                                                           */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "convert", "convert between circuit formats" );
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    cmd->add_option( "input", *in_path, "input circuit (.aag or .blif)" )->required();
    cmd->add_option( "output", *out_path, "output circuit (.aag or .blif)" )->required();
    cmd->callback( [=, &action]() {
      action = [=]() {
        save_circuit( load_circuit( *in_path ), *out_path );
        return 0;
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* check-equiv                                                       */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "check-equiv", "combinational equivalence of two circuits" );
    auto a_path = std::make_shared<std::string>();
    auto b_path = std::make_shared<std::string>();
    auto patterns = std::make_shared<uint32_t>( 256 );
    cmd->add_option( "first", *a_path, "circuit A (.aag or .blif)" )->required();
    cmd->add_option( "second", *b_path, "circuit B (.aag or .blif)" )->required();
    cmd->add_option( "--patterns", *patterns, "random 64-bit pattern words beyond exhaustive range" );
    cmd->callback( [=, &action]() {
      action = [=]() {
        auto const verdict =
            migdse::check_equivalence( load_circuit( *a_path ), load_circuit( *b_path ), *patterns );
        switch ( verdict.kind )
        {
        case migdse::equivalence_verdict::kind_t::equivalent:
          std::cout << "equivalent\n";
          return 0;
        case migdse::equivalence_verdict::kind_t::not_equivalent:
          std::cout << "not equivalent\n";
          return 1;
        default:
          std::cout << "probably equivalent\n";
          return 2;
        }
      };
    } );
  }

  /* ---------------------------------------------------------------- */
  /* recipes                                                           */
  /* ---------------------------------------------------------------- */
  {
    auto* cmd = app.add_subcommand( "recipes", "print the recipe table manifest and its hash" );
    cmd->callback( [&action]() {
      action = []() {
        std::cout << migdse::recipe_manifest();
        std::cout << "hash=" << migdse::to_hex( migdse::recipe_table_hash() ) << "\n";
        return 0;
      };
    } );
  }

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::CallForAllHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try
  {
    return action ? action() : 0;
  }
  catch ( usage_error const& e )
  {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  catch ( migdse::error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
