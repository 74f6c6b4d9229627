/*!
  \file test_cli.cpp
  \brief End-to-end checks of the command-line tool
*/

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#if defined( __unix__ ) || defined( __APPLE__ )
#include <sys/wait.h>
#endif

#include <catch_amalgamated.hpp>

#include <migdse/io/aiger.hpp>
#include <migdse/io/blif.hpp>
#include <migdse/io/convert.hpp>
#include <migdse/mig.hpp>
#include <migdse/prm.hpp>
#include <migdse/trajectory.hpp>

using namespace migdse;

namespace
{

std::string const binary = MIGDSE_BIN;

struct command_result
{
  int exit_code;
  std::string output; //!< stdout and stderr combined
};

/*! \brief Runs the tool with `args`, capturing combined output */
command_result run_cli( std::string const& args )
{
  auto const dir = std::filesystem::temp_directory_path();
  auto const capture = ( dir / "migdse_cli_out.txt" ).string();
  std::string const cmd = binary + " " + args + " > " + capture + " 2>&1";
  int const status = std::system( cmd.c_str() );
  std::ifstream in( capture );
  std::stringstream buffer;
  buffer << in.rdbuf();
  int code = -1;
#if defined( WIFEXITED )
  if ( WIFEXITED( status ) )
    code = WEXITSTATUS( status );
#else
  code = status;
#endif
  return { code, buffer.str() };
}

std::string temp_path( std::string const& name )
{
  return ( std::filesystem::temp_directory_path() / name ).string();
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream os( path, std::ios::binary );
  os << text;
}

std::string read_file( std::string const& path )
{
  std::ifstream is( path, std::ios::binary );
  std::stringstream buffer;
  buffer << is.rdbuf();
  return buffer.str();
}

/*! \brief Small two-output circuit used as the common fixture */
mig fixture_mig()
{
  mig m( 4 );
  auto const f = m.make_maj( m.pi( 0 ), m.pi( 1 ), m.pi( 2 ) );
  auto const g = m.make_xor( m.pi( 2 ), m.pi( 3 ) );
  m.create_po( f );
  m.create_po( !g );
  return m;
}

/*! \brief Writes the fixture once and returns its path */
std::string fixture_path()
{
  static std::string const path = [] {
    auto const p = temp_path( "cli_fixture.blif" );
    write_file( p, write_blif( fixture_mig() ) );
    return p;
  }();
  return path;
}

} // namespace

TEST_CASE( "usage errors exit with code two", "[cli]" )
{
  CHECK( run_cli( "" ).exit_code == 2 );
  CHECK( run_cli( "--bogus-flag" ).exit_code == 2 );
  CHECK( run_cli( "no-such-subcommand" ).exit_code == 2 );
  CHECK( run_cli( "fit" ).exit_code == 2 ); /* missing required options */
  CHECK( run_cli( "explore --circuit " + fixture_path() + " --mode nonsense" ).exit_code == 2 );

  auto const help = run_cli( "--help" );
  CHECK( help.exit_code == 0 );
  CHECK( help.output.find( "collect" ) != std::string::npos );
  CHECK( help.output.find( "explore" ) != std::string::npos );
}

TEST_CASE( "recipe listing", "[cli]" )
{
  auto const r = run_cli( "recipes" );
  CHECK( r.exit_code == 0 );
  CHECK( r.output.find( "recipes.count=30" ) != std::string::npos );
  CHECK( r.output.find( "recipe.0.family=" ) != std::string::npos );
  CHECK( r.output.find( "recipe.29.passes=" ) != std::string::npos );
  CHECK( r.output.find( "hash=" ) != std::string::npos );
}

TEST_CASE( "collect produces a well-formed dataset", "[cli]" )
{
  auto const out = temp_path( "cli_collect.jsonl" );
  auto const r = run_cli( "collect --circuit " + fixture_path() +
                          " --runs 2 --steps 3 --seed 5 --out " + out );
  REQUIRE( r.exit_code == 0 );

  auto const text = read_file( out );
  auto const ds = read_jsonl( text );
  REQUIRE( ds.trajectories.size() == 2 );
  uint64_t steps = 0;
  for ( auto const& t : ds.trajectories )
    steps += t.steps.size();
  CHECK( steps == 6 );
  CHECK( ds.benchmark == "cli_fixture" );
  CHECK( ds.seed == 5 );

  SECTION( "identical invocations produce identical bytes" )
  {
    auto const out2 = temp_path( "cli_collect2.jsonl" );
    auto const r2 = run_cli( "collect --circuit " + fixture_path() +
                             " --runs 2 --steps 3 --seed 5 --out " + out2 );
    REQUIRE( r2.exit_code == 0 );
    CHECK( read_file( out2 ) == text );
  }
  SECTION( "a different seed selects different recipes" )
  {
    auto const out3 = temp_path( "cli_collect3.jsonl" );
    auto const r3 = run_cli( "collect --circuit " + fixture_path() +
                             " --runs 2 --steps 3 --seed 6 --out " + out3 );
    REQUIRE( r3.exit_code == 0 );
    auto const other = read_jsonl( read_file( out3 ) );
    auto recipes_of = []( dataset const& d ) {
      std::vector<uint32_t> r;
      for ( auto const& t : d.trajectories )
        for ( auto const& s : t.steps )
          r.push_back( s.recipe );
      return r;
    };
    CHECK( recipes_of( other ) != recipes_of( ds ) );
  }
  SECTION( "a missing input file is a domain error" )
  {
    CHECK( run_cli( "collect --circuit /nonexistent/x.blif --runs 1 --steps 1 --out " +
                    temp_path( "nope.jsonl" ) )
               .exit_code == 1 );
  }
}

TEST_CASE( "fit trains and reports models", "[cli]" )
{
  auto const data = temp_path( "cli_fit_data.jsonl" );
  REQUIRE( run_cli( "collect --circuit " + fixture_path() +
                    " --runs 6 --steps 12 --seed 3 --out " + data )
               .exit_code == 0 );

  SECTION( "statistical one-step model" )
  {
    auto const model_path = temp_path( "cli_model_1sa.json" );
    auto const r = run_cli( "fit --data " + data +
                            " --model stat1sa --target mig_nodes --valid-frac 0 --out " +
                            model_path );
    REQUIRE( r.exit_code == 0 );
    CHECK( r.output.find( "\"kind\":" ) != std::string::npos );
    CHECK( r.output.find( "\"rmse\":" ) != std::string::npos );

    auto const doc = read_model( read_file( model_path ) );
    REQUIRE( std::holds_alternative<stat_model_1sa>( doc ) );

    /* with the split disabled, the stored model equals a direct full-data fit */
    auto const ds = read_jsonl( read_file( data ) );
    auto const direct = fit_statistical_1sa( ds, target_metric::mig_nodes );
    CHECK( std::get<stat_model_1sa>( doc ).fallback == direct.fallback );
    CHECK( std::get<stat_model_1sa>( doc ).mean_delta == direct.mean_delta );
  }
  SECTION( "pair model with a validation split" )
  {
    auto const model_path = temp_path( "cli_model_2sa.json" );
    auto const r = run_cli( "fit --data " + data +
                            " --model stat2sa --target mig_nodes --valid-frac 0.25 --out " +
                            model_path );
    REQUIRE( r.exit_code == 0 );
    REQUIRE( std::holds_alternative<stat_model_2sa>( read_model( read_file( model_path ) ) ) );
  }
  SECTION( "context model smoke run" )
  {
    auto const model_path = temp_path( "cli_model_ctx.json" );
    auto const r = run_cli( "fit --data " + data +
                            " --model context --target mig_nodes --context-length 2 --hidden 8 "
                            "--epochs 3 --out " +
                            model_path );
    REQUIRE( r.exit_code == 0 );
    REQUIRE( std::holds_alternative<context_model>( read_model( read_file( model_path ) ) ) );
  }
  SECTION( "evaluate reports the error of a stored model on a dataset" )
  {
    auto const model_path = temp_path( "cli_model_eval.json" );
    REQUIRE( run_cli( "fit --data " + data + " --model stat1sa --target mig_nodes --out " +
                      model_path )
                 .exit_code == 0 );
    auto const r = run_cli( "evaluate --model " + model_path + " --data " + data );
    REQUIRE( r.exit_code == 0 );
    CHECK( r.output.find( "\"rmse\":" ) != std::string::npos );
    CHECK( r.output.find( "\"samples\":" ) != std::string::npos );
  }
  SECTION( "a corrupt dataset is a domain error" )
  {
    auto const bad = temp_path( "cli_bad.jsonl" );
    write_file( bad, "this is not a dataset\n" );
    CHECK( run_cli( "fit --data " + bad + " --model stat1sa --out " +
                    temp_path( "cli_bad_model.json" ) )
               .exit_code == 1 );
  }
}

TEST_CASE( "explore searches and writes artifacts", "[cli]" )
{
  SECTION( "uniform exploration emits an equivalent best circuit" )
  {
    auto const best_path = temp_path( "cli_best.blif" );
    auto const traces = temp_path( "cli_traces.jsonl" );
    auto const r = run_cli( "explore --circuit " + fixture_path() +
                            " --runs 2 --chain-length 4 --seed 2 --target mig_nodes --out-best " +
                            best_path + " --out-traces " + traces );
    REQUIRE( r.exit_code == 0 );
    CHECK( r.output.find( "best (run" ) != std::string::npos );

    auto const best = parse_blif( read_file( best_path ) );
    auto const verdict = check_equivalence( best, fixture_mig() );
    CHECK( verdict.kind == equivalence_verdict::kind_t::equivalent );
    /* the search starts from the parsed fixture, whose sum-of-products covers
       may be larger than the handcrafted network that wrote the file */
    auto const start = parse_blif( read_file( fixture_path() ) );
    CHECK( best.node_count() <= start.node_count() );

    auto const ds = read_jsonl( read_file( traces ) );
    CHECK( ds.trajectories.size() == 2 );
  }
  SECTION( "guided exploration without a model is a usage error" )
  {
    auto const r =
        run_cli( "explore --circuit " + fixture_path() + " --runs 1 --chain-length 2 --mode 1sa" );
    CHECK( r.exit_code == 2 );
    CHECK( r.output.find( "--model" ) != std::string::npos );
  }
  SECTION( "guided exploration with a model works end to end" )
  {
    auto const data = temp_path( "cli_explore_data.jsonl" );
    REQUIRE( run_cli( "collect --circuit " + fixture_path() +
                      " --runs 4 --steps 10 --seed 9 --out " + data )
                 .exit_code == 0 );
    auto const model_path = temp_path( "cli_explore_model.json" );
    REQUIRE( run_cli( "fit --data " + data +
                      " --model stat1sa --target mig_nodes --valid-frac 0 --out " + model_path )
                 .exit_code == 0 );
    auto const r = run_cli( "explore --circuit " + fixture_path() +
                            " --runs 2 --chain-length 6 --mode 1sa --temperature 2 --model " +
                            model_path + " --target mig_nodes" );
    CHECK( r.exit_code == 0 );
  }
}

TEST_CASE( "conversion round-trips preserve the function", "[cli]" )
{
  auto const src = temp_path( "cli_conv.aag" );
  write_file( src, write_aiger_ascii( mig_to_aig( fixture_mig() ) ) );

  auto const as_blif = temp_path( "cli_conv.blif" );
  REQUIRE( run_cli( "convert " + src + " " + as_blif ).exit_code == 0 );
  auto const back = temp_path( "cli_conv_back.aag" );
  REQUIRE( run_cli( "convert " + as_blif + " " + back ).exit_code == 0 );

  auto const original = aig_to_mig( parse_aiger_ascii( read_file( src ) ) );
  auto const there = parse_blif( read_file( as_blif ) );
  auto const again = aig_to_mig( parse_aiger_ascii( read_file( back ) ) );
  CHECK( check_equivalence( original, there ).kind == equivalence_verdict::kind_t::equivalent );
  CHECK( check_equivalence( original, again ).kind == equivalence_verdict::kind_t::equivalent );

  SECTION( "unknown extensions are rejected" )
  {
    CHECK( run_cli( "convert " + src + " " + temp_path( "cli_conv.xyz" ) ).exit_code == 1 );
  }
}

TEST_CASE( "equivalence checking exit codes", "[cli]" )
{
  auto const a = temp_path( "cli_eq_a.blif" );
  auto const b = temp_path( "cli_eq_b.blif" );
  write_file( a, write_blif( fixture_mig() ) );
  write_file( b, write_blif( fixture_mig() ) );

  SECTION( "equivalent pair exits zero" )
  {
    auto const r = run_cli( "check-equiv " + a + " " + b );
    CHECK( r.exit_code == 0 );
    CHECK( r.output.find( "equivalent" ) != std::string::npos );
  }
  SECTION( "inequivalent pair exits one" )
  {
    mig other( 4 );
    other.create_po( other.make_and( other.pi( 0 ), other.pi( 1 ) ) );
    other.create_po( other.pi( 2 ) );
    auto const c = temp_path( "cli_eq_c.blif" );
    write_file( c, write_blif( other ) );
    auto const r = run_cli( "check-equiv " + a + " " + c );
    CHECK( r.exit_code == 1 );
    CHECK( r.output.find( "not equivalent" ) != std::string::npos );
  }
  SECTION( "wide circuits fall back to sampling and exit two" )
  {
    mig wide( 20 );
    auto acc = wide.pi( 0 );
    for ( uint32_t i = 1; i < 20; ++i )
      acc = wide.make_and( acc, wide.pi( i ) );
    wide.create_po( acc );
    auto const w1 = temp_path( "cli_eq_w1.blif" );
    auto const w2 = temp_path( "cli_eq_w2.blif" );
    write_file( w1, write_blif( wide ) );
    write_file( w2, write_blif( wide ) );
    auto const r = run_cli( "check-equiv " + w1 + " " + w2 );
    CHECK( r.exit_code == 2 );
    CHECK( r.output.find( "probably equivalent" ) != std::string::npos );
  }
}

TEST_CASE( "sweep and grid subcommands emit reports", "[cli]" )
{
  auto const data = temp_path( "cli_sweep_data.jsonl" );
  REQUIRE( run_cli( "collect --circuit " + fixture_path() +
                    " --runs 5 --steps 12 --seed 4 --out " + data )
               .exit_code == 0 );
  auto const model_path = temp_path( "cli_sweep_model.json" );
  REQUIRE( run_cli( "fit --data " + data +
                    " --model stat1sa --target mig_nodes --valid-frac 0 --out " + model_path )
               .exit_code == 0 );

  SECTION( "temperature sweep writes the CSV table" )
  {
    auto const csv = temp_path( "cli_sweep.csv" );
    auto const svg = temp_path( "cli_sweep.svg" );
    auto const r = run_cli( "sweep-temperature --circuit " + fixture_path() + " --model " +
                            model_path +
                            " --runs 6 --chain-length 8 --temperatures 1,5 --targets 4,10 "
                            "--target mig_nodes --seed 2 --out-csv " +
                            csv + " --out-svg " + svg );
    REQUIRE( r.exit_code == 0 );
    auto const table = read_file( csv );
    CHECK( table.rfind( "temperature,target,fraction,speedup,runs,wilson_low,wilson_high\n", 0 )
           == 0 );
    CHECK( table.find( "inf," ) != std::string::npos );
    CHECK( read_file( svg ).rfind( "<svg", 0 ) == 0 );
  }
  SECTION( "restart grid writes the CSV table" )
  {
    auto const csv = temp_path( "cli_grid.csv" );
    auto const r = run_cli( "grid-iism --circuit " + fixture_path() +
                            " --budget 200 --chain-lengths 5,10 --chains-list 1,2 --seed 3 "
                            "--out-csv " +
                            csv );
    REQUIRE( r.exit_code == 0 );
    auto const table = read_file( csv );
    CHECK( table.rfind( "chain_length,chains,runs,min,mean,median\n", 0 ) == 0 );
    CHECK( table.find( "\n5,1," ) != std::string::npos );
  }
}
