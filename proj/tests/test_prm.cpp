/*!
  \file test_prm.cpp
  \brief Prediction models: statistical means, pair tables, learned regressor
*/

#include <cmath>
#include <map>

#include <catch_amalgamated.hpp>

#include <migdse/prm.hpp>
#include <migdse/recipes.hpp>

using namespace migdse;

namespace
{

/*! \brief Builds one-chain trajectories from explicit size sequences */
dataset sized_dataset( std::vector<std::pair<std::vector<int64_t>, std::vector<uint32_t>>> const& runs,
                       int64_t initial_size )
{
  dataset d;
  d.benchmark = "toy";
  d.table_hash = recipe_table_hash();
  d.seed = 1;
  d.initial = { initial_size, 0, 0, 0 };
  uint32_t run_id = 0;
  for ( auto const& [sizes, recipes] : runs )
  {
    REQUIRE( sizes.size() == recipes.size() );
    trajectory t;
    t.initial = d.initial;
    for ( uint32_t s = 0; s < sizes.size(); ++s )
      t.steps.push_back( { run_id, 0, 0, s, recipes[s], { sizes[s], 0, 0, 0 } } );
    d.trajectories.push_back( std::move( t ) );
    ++run_id;
  }
  return d;
}

dataset random_walk_dataset( uint32_t runs, uint32_t steps, uint64_t seed )
{
  dataset d;
  d.benchmark = "walk";
  d.table_hash = recipe_table_hash();
  d.seed = seed;
  d.initial = { 500, 0, 0, 0 };
  rng_stream rng( seed );
  for ( uint32_t r = 0; r < runs; ++r )
  {
    trajectory t;
    t.initial = d.initial;
    int64_t size = d.initial.mig_nodes;
    for ( uint32_t s = 0; s < steps; ++s )
    {
      size += static_cast<int64_t>( rng.next_below( 11 ) ) - 5;
      t.steps.push_back( { r, 0, 0, s, static_cast<uint32_t>( rng.next_below( 30 ) ),
                           { size, 0, 0, 0 } } );
    }
    d.trajectories.push_back( std::move( t ) );
  }
  return d;
}

} // namespace

TEST_CASE( "one-step means on the hand-computed trajectory", "[prm]" )
{
  auto const d = sized_dataset( { { { 95, 97, 90 }, { 2, 7, 2 } } }, 100 );
  auto const m = fit_statistical_1sa( d, target_metric::mig_nodes );

  CHECK( m.mean_delta[2] == Catch::Approx( -6.0 ).margin( 1e-12 ) );
  CHECK( m.mean_delta[7] == Catch::Approx( 2.0 ).margin( 1e-12 ) );
  CHECK( m.count[2] == 2 );
  CHECK( m.count[7] == 1 );
  CHECK( m.fallback == Catch::Approx( -10.0 / 3.0 ).margin( 1e-12 ) );
  /* unseen recipe falls back to the global mean */
  CHECK( m.delta_for( 11 ) == Catch::Approx( -10.0 / 3.0 ).margin( 1e-12 ) );

  SECTION( "empty dataset is rejected" )
  {
    dataset empty;
    empty.initial = { 1, 0, 0, 0 };
    CHECK_THROWS_AS( fit_statistical_1sa( empty, target_metric::mig_nodes ), error );
  }
  SECTION( "all-zero deltas give all-zero means" )
  {
    auto const z = sized_dataset( { { { 50, 50, 50 }, { 1, 2, 3 } } }, 50 );
    auto const mz = fit_statistical_1sa( z, target_metric::mig_nodes );
    for ( uint32_t r = 0; r < 30; ++r )
      CHECK( mz.delta_for( r ) == 0.0 );
  }
}

TEST_CASE( "two-step pair means on the hand-computed trajectory", "[prm]" )
{
  auto const d = sized_dataset( { { { 95, 97, 90 }, { 2, 7, 2 } } }, 100 );
  auto const m = fit_statistical_2sa( d, target_metric::mig_nodes );

  CHECK( m.delta_for( 2, 7 ) == Catch::Approx( -3.0 ).margin( 1e-12 ) );
  CHECK( m.delta_for( 7, 2 ) == Catch::Approx( -5.0 ).margin( 1e-12 ) );
  /* unseen pair: sum of embedded one-step means */
  CHECK( m.delta_for( 2, 2 ) == Catch::Approx( -6.0 + -6.0 ).margin( 1e-12 ) );

  SECTION( "single-step trajectories contribute no pairs" )
  {
    auto const s = sized_dataset( { { { 95 }, { 2 } } }, 100 );
    auto const ms = fit_statistical_2sa( s, target_metric::mig_nodes );
    for ( auto c : ms.pair_count )
      CHECK( c == 0 );
  }
}

TEST_CASE( "statistical fits match a brute-force oracle", "[prm]" )
{
  for ( uint64_t seed = 1; seed <= 5; ++seed )
  {
    auto const d = random_walk_dataset( 6, 40, seed );

    /* oracle: independent group-by-mean over explicit (before, after) pairs */
    std::map<uint32_t, std::pair<double, uint64_t>> groups;
    double all_sum = 0.0;
    uint64_t all_n = 0;
    std::map<std::pair<uint32_t, uint32_t>, std::pair<double, uint64_t>> pair_groups;
    for ( auto const& t : d.trajectories )
    {
      for ( size_t i = 0; i < t.steps.size(); ++i )
      {
        int64_t const before = i == 0 ? t.initial.mig_nodes : t.steps[i - 1].metrics.mig_nodes;
        double const delta = double( t.steps[i].metrics.mig_nodes - before );
        auto& g = groups[t.steps[i].recipe];
        g.first += delta;
        g.second += 1;
        all_sum += delta;
        all_n += 1;
        if ( i + 1 < t.steps.size() )
        {
          double const two = double( t.steps[i + 1].metrics.mig_nodes - before );
          auto& pg = pair_groups[{ t.steps[i].recipe, t.steps[i + 1].recipe }];
          pg.first += two;
          pg.second += 1;
        }
      }
    }

    auto const m1 = fit_statistical_1sa( d, target_metric::mig_nodes );
    for ( auto const& [recipe, acc] : groups )
    {
      CHECK( m1.count[recipe] == acc.second );
      CHECK( m1.mean_delta[recipe] == Catch::Approx( acc.first / acc.second ).margin( 1e-9 ) );
    }
    CHECK( m1.fallback == Catch::Approx( all_sum / all_n ).margin( 1e-9 ) );

    auto const m2 = fit_statistical_2sa( d, target_metric::mig_nodes );
    for ( auto const& [pair, acc] : pair_groups )
    {
      auto const idx = pair.first * 30 + pair.second;
      CHECK( m2.pair_count[idx] == acc.second );
      CHECK( m2.pair_mean[idx] == Catch::Approx( acc.first / acc.second ).margin( 1e-9 ) );
    }
  }
}

TEST_CASE( "prediction vectors", "[prm]" )
{
  auto const d = sized_dataset( { { { 95, 97, 90 }, { 2, 7, 2 } } }, 100 );
  auto const m = fit_statistical_1sa( d, target_metric::mig_nodes );

  auto const p = predict_1sa( m, 100.0 );
  REQUIRE( p.size() == 30 );
  CHECK( p[2] == Catch::Approx( 94.0 ).margin( 1e-12 ) );
  CHECK( p[7] == Catch::Approx( 102.0 ).margin( 1e-12 ) );

  SECTION( "translation consistency" )
  {
    auto const q = predict_1sa( m, 150.0 );
    for ( uint32_t r = 0; r < 30; ++r )
      CHECK( q[r] - p[r] == Catch::Approx( 50.0 ).margin( 1e-12 ) );
  }
  SECTION( "zero-mean model predicts the current value everywhere" )
  {
    stat_model_1sa z;
    z.target = target_metric::mig_nodes;
    auto const q = predict_1sa( z, 42.0 );
    for ( auto v : q )
      CHECK( v == 42.0 );
  }
  SECTION( "pair predictions enumerate all 900 ordered pairs" )
  {
    auto const m2 = fit_statistical_2sa( d, target_metric::mig_nodes );
    auto const q = predict_2sa( m2, 100.0 );
    REQUIRE( q.size() == 900 );
    CHECK( q[2 * 30 + 7] == Catch::Approx( 97.0 ).margin( 1e-12 ) );
  }
}

TEST_CASE( "validation error follows the direct formula", "[prm]" )
{
  /* model predicts 95 then 89 from the means; craft truths for known errors */
  SECTION( "known two-point case" )
  {
    auto const train = sized_dataset( { { { 95 }, { 3 } } }, 100 ); /* mean(r3) = -5 */
    auto const m = fit_statistical_1sa( train, target_metric::mig_nodes );
    /* validation run: initial 100, recipes 3,3; truth 95 then 88.
       predictions: 95 (hit), 90 vs truth 88 → errors 0 and 2 → rmse sqrt(2) */
    auto const valid = sized_dataset( { { { 95, 88 }, { 3, 3 } } }, 100 );
    auto const rep = evaluate_rmse( m, valid );
    CHECK( rep.samples == 2 );
    CHECK( rep.rmse == Catch::Approx( std::sqrt( 2.0 ) ).margin( 1e-12 ) );
  }
  SECTION( "perfect model scores zero" )
  {
    auto const d = sized_dataset( { { { 95, 90, 85 }, { 3, 3, 3 } } }, 100 );
    auto const m = fit_statistical_1sa( d, target_metric::mig_nodes );
    CHECK( evaluate_rmse( m, d ).rmse == Catch::Approx( 0.0 ).margin( 1e-12 ) );
  }
  SECTION( "constant offset d gives rmse |d|" )
  {
    auto const train = sized_dataset( { { { 97, 94, 91 }, { 4, 4, 4 } } }, 100 ); /* mean -3 */
    auto const m = fit_statistical_1sa( train, target_metric::mig_nodes );
    auto const valid = sized_dataset( { { { 93, 86, 79 }, { 4, 4, 4 } } }, 100 ); /* true -7 */
    CHECK( evaluate_rmse( m, valid ).rmse == Catch::Approx( 4.0 ).margin( 1e-12 ) );
  }
  SECTION( "empty validation set is rejected" )
  {
    auto const d = sized_dataset( { { { 95 }, { 3 } } }, 100 );
    auto const m = fit_statistical_1sa( d, target_metric::mig_nodes );
    dataset empty;
    empty.initial = { 1, 0, 0, 0 };
    CHECK_THROWS_AS( evaluate_rmse( m, empty ), error );
  }
  SECTION( "record order does not matter" )
  {
    auto const d = random_walk_dataset( 5, 20, 17 );
    auto const m = fit_statistical_1sa( d, target_metric::mig_nodes );
    auto shuffled = d;
    std::swap( shuffled.trajectories[0], shuffled.trajectories[4] );
    std::swap( shuffled.trajectories[1], shuffled.trajectories[3] );
    CHECK( evaluate_rmse( m, shuffled ).rmse == Catch::Approx( evaluate_rmse( m, d ).rmse ) );
  }
}

TEST_CASE( "learned regressor: analytic gradients match finite differences", "[prm]" )
{
  rng_stream rng( 0x6eadbeef );
  for ( int trial = 0; trial < 10; ++trial )
  {
    context_model m;
    m.context_length = 1 + static_cast<uint32_t>( rng.next_below( 4 ) );
    m.hidden = 2 + static_cast<uint32_t>( rng.next_below( 6 ) );
    m.feat_mean = { 0.0, 0.0, 0.0, 0.0 };
    m.feat_scale = { 1.0, 1.0, 1.0, 1.0 };
    uint32_t const d = m.input_dim();
    m.w1.resize( size_t( d ) * m.hidden );
    m.b1.resize( m.hidden );
    m.w2.resize( m.hidden );
    for ( auto& w : m.w1 )
      w = rng.next_real( -0.7, 0.7 );
    for ( auto& w : m.b1 )
      w = rng.next_real( -0.7, 0.7 );
    for ( auto& w : m.w2 )
      w = rng.next_real( -0.7, 0.7 );
    m.b2 = rng.next_real( -0.7, 0.7 );

    std::vector<double> x( d );
    for ( auto& v : x )
      v = rng.next_real( -1.0, 1.0 );
    double const label = rng.next_real( -2.0, 2.0 );

    context_gradients g;
    loss_and_gradient( m, x, label, g );

    double const eps = 1e-6;
    auto check_grad = [&]( double& weight, double analytic ) {
      double const saved = weight;
      weight = saved + eps;
      context_gradients scratch;
      double const up = loss_and_gradient( m, x, label, scratch );
      weight = saved - eps;
      double const down = loss_and_gradient( m, x, label, scratch );
      weight = saved;
      double const numeric = ( up - down ) / ( 2.0 * eps );
      double const denom = std::max( { std::fabs( numeric ), std::fabs( analytic ), 1e-6 } );
      CHECK( std::fabs( numeric - analytic ) / denom < 1e-4 );
    };

    /* spot-check a handful of coordinates per tensor */
    for ( int k = 0; k < 4; ++k )
    {
      auto const i = rng.next_below( m.w1.size() );
      check_grad( m.w1[i], g.w1[i] );
    }
    auto const bi = rng.next_below( m.b1.size() );
    check_grad( m.b1[bi], g.b1[bi] );
    auto const wi = rng.next_below( m.w2.size() );
    check_grad( m.w2[wi], g.w2[wi] );
    check_grad( m.b2, g.b2 );
  }
}

TEST_CASE( "learned regressor drives validation error below 1e-3 on noiseless data",
           "[prm][slow]" )
{
  /* deterministic per-recipe deltas: recipe r always moves the size by (r % 5) - 2 */
  dataset d;
  d.benchmark = "noiseless";
  d.table_hash = recipe_table_hash();
  d.seed = 3;
  d.initial = { 500, 0, 0, 0 };
  rng_stream rng( 0x5eed );
  for ( uint32_t r = 0; r < 40; ++r )
  {
    trajectory t;
    t.initial = d.initial;
    int64_t size = 500;
    for ( uint32_t s = 0; s < 20; ++s )
    {
      auto const recipe = static_cast<uint32_t>( rng.next_below( 30 ) );
      size += static_cast<int64_t>( recipe % 5 ) - 2;
      t.steps.push_back( { r, 0, 0, s, recipe, { size, 0, 0, 0 } } );
    }
    d.trajectories.push_back( std::move( t ) );
  }
  auto const [train, valid] = split_dataset( d, 0.2, 3 );

  context_fit_config cfg;
  cfg.context_length = 1;
  cfg.hidden = 24;
  cfg.epochs = 16000;
  cfg.learning_rate = 0.3;
  cfg.batch = 100000; /* full-batch gradient descent */
  cfg.seed = 7;
  auto const [model, report] = fit_context_model( train, target_metric::mig_nodes, cfg );
  CHECK( report.rmse < 1e-3 );
  CHECK( evaluate_rmse( model, valid ).rmse < 1e-3 );

  SECTION( "training is deterministic given the seed" )
  {
    context_fit_config quick = cfg;
    quick.epochs = 50;
    auto const a = fit_context_model( train, target_metric::mig_nodes, quick ).first;
    auto const b = fit_context_model( train, target_metric::mig_nodes, quick ).first;
    CHECK( a.w1 == b.w1 );
    CHECK( a.b1 == b.b1 );
    CHECK( a.w2 == b.w2 );
    CHECK( a.b2 == b.b2 );
  }
  SECTION( "hyperparameter validation" )
  {
    context_fit_config bad = cfg;
    bad.context_length = 21;
    CHECK_THROWS_AS( fit_context_model( train, target_metric::mig_nodes, bad ), error );
    bad = cfg;
    bad.hidden = 0;
    CHECK_THROWS_AS( fit_context_model( train, target_metric::mig_nodes, bad ), error );
  }
}

TEST_CASE( "model serialization round-trips exactly", "[prm]" )
{
  auto const d = random_walk_dataset( 5, 30, 77 );

  SECTION( "statistical one-step" )
  {
    prediction_model m = fit_statistical_1sa( d, target_metric::transistors );
    auto const text = write_model( m );
    auto const back = read_model( text );
    REQUIRE( std::holds_alternative<stat_model_1sa>( back ) );
    CHECK( write_model( back ) == text );
    CHECK( std::get<stat_model_1sa>( back ).mean_delta
           == std::get<stat_model_1sa>( m ).mean_delta );
  }
  SECTION( "statistical two-step" )
  {
    prediction_model m = fit_statistical_2sa( d, target_metric::mig_nodes );
    auto const text = write_model( m );
    auto const back = read_model( text );
    REQUIRE( std::holds_alternative<stat_model_2sa>( back ) );
    CHECK( write_model( back ) == text );
  }
  SECTION( "learned regressor with exact weight recovery" )
  {
    context_fit_config cfg;
    cfg.context_length = 2;
    cfg.hidden = 8;
    cfg.epochs = 5;
    prediction_model m = fit_context_model( d, target_metric::mig_nodes, cfg ).first;
    auto const text = write_model( m );
    auto const back = read_model( text );
    REQUIRE( std::holds_alternative<context_model>( back ) );
    CHECK( std::get<context_model>( back ).w1 == std::get<context_model>( m ).w1 );
    CHECK( std::get<context_model>( back ).label_scale
           == std::get<context_model>( m ).label_scale );
    CHECK( write_model( back ) == text );
  }
  SECTION( "corrupted documents are rejected" )
  {
    CHECK_THROWS_AS( read_model( "not json" ), parse_error );
    CHECK_THROWS_AS( read_model( "{\"kind\":\"unknown\"}" ), parse_error );
    prediction_model m = fit_statistical_1sa( d, target_metric::mig_nodes );
    auto text = write_model( m );
    auto const pos = text.find( "statistical_1sa" );
    REQUIRE( pos != std::string::npos );
    text.replace( pos, 15, "statistical_9sa" );
    CHECK_THROWS_AS( read_model( text ), parse_error );
  }
}
