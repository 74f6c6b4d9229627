/*!
  \file test_pom.cpp
  \brief Sampling policy: tempered softmax and recipe selection
*/

#include <cmath>
#include <limits>
#include <numeric>

#include <catch_amalgamated.hpp>

#include <migdse/pom.hpp>
#include <migdse/recipes.hpp>

using namespace migdse;

TEST_CASE( "tempered softmax on a pinned two-entry input", "[pom]" )
{
  auto const p = softmax_temperature( std::vector<double>{ 340.0, 350.0 }, 5.0 );
  REQUIRE( p.size() == 2 );
  /* gap of 10 at T=5 → logistic(2) split */
  CHECK( p[0] == Catch::Approx( 0.880797 ).margin( 1e-6 ) );
  CHECK( p[1] == Catch::Approx( 0.119203 ).margin( 1e-6 ) );
}

TEST_CASE( "tempered softmax properties", "[pom]" )
{
  std::vector<double> const sizes{ 310.0, 355.5, 298.0, 340.0, 320.25 };

  SECTION( "probabilities are positive and sum to one" )
  {
    for ( double t : { 0.1, 1.0, 5.0, 250.0 } )
    {
      auto const p = softmax_temperature( sizes, t );
      REQUIRE( p.size() == sizes.size() );
      double sum = 0.0;
      for ( double v : p )
      {
        CHECK( v > 0.0 );
        sum += v;
      }
      CHECK( sum == Catch::Approx( 1.0 ).margin( 1e-12 ) );
    }
  }
  SECTION( "smaller sizes receive larger probabilities" )
  {
    auto const p = softmax_temperature( sizes, 5.0 );
    for ( size_t i = 0; i < sizes.size(); ++i )
      for ( size_t j = 0; j < sizes.size(); ++j )
        if ( sizes[i] < sizes[j] )
          CHECK( p[i] > p[j] );
  }
  SECTION( "equal sizes give the uniform distribution" )
  {
    auto const p = softmax_temperature( std::vector<double>( 30, 123.0 ), 2.0 );
    for ( double v : p )
      CHECK( v == Catch::Approx( 1.0 / 30.0 ).margin( 1e-12 ) );
  }
  SECTION( "adding a constant to every size changes nothing" )
  {
    auto shifted = sizes;
    for ( auto& v : shifted )
      v += 1000.0;
    auto const a = softmax_temperature( sizes, 3.0 );
    auto const b = softmax_temperature( shifted, 3.0 );
    for ( size_t i = 0; i < a.size(); ++i )
      CHECK( a[i] == Catch::Approx( b[i] ).margin( 1e-12 ) );
  }
  SECTION( "high temperature approaches uniform, low concentrates on the argmin" )
  {
    auto const hot = softmax_temperature( sizes, 1e6 );
    for ( double v : hot )
      CHECK( v == Catch::Approx( 1.0 / 5.0 ).margin( 1e-4 ) );
    auto const cold = softmax_temperature( sizes, 0.01 );
    CHECK( cold[2] > 0.999 ); /* 298 is the minimum */
  }
  SECTION( "probability ratios steepen monotonically as temperature drops" )
  {
    double prev_ratio = 1.0;
    for ( double t : { 100.0, 10.0, 5.0, 1.0 } )
    {
      auto const p = softmax_temperature( sizes, t );
      double const ratio = p[2] / p[1]; /* best vs worst */
      CHECK( ratio > prev_ratio );
      prev_ratio = ratio;
    }
  }
  SECTION( "huge magnitudes do not overflow thanks to the max shift" )
  {
    auto const p = softmax_temperature( std::vector<double>{ 1e8, 1e8 + 1.0 }, 1.0 );
    CHECK( std::isfinite( p[0] ) );
    CHECK( p[0] + p[1] == Catch::Approx( 1.0 ).margin( 1e-12 ) );
  }
  SECTION( "invalid inputs are rejected" )
  {
    CHECK_THROWS_AS( softmax_temperature( std::vector<double>{}, 5.0 ), error );
    CHECK_THROWS_AS( softmax_temperature( sizes, 0.0 ), error );
    CHECK_THROWS_AS( softmax_temperature( sizes, -2.0 ), error );
    CHECK_THROWS_AS( softmax_temperature( sizes, std::numeric_limits<double>::infinity() ),
                     error );
    CHECK_THROWS_AS(
        softmax_temperature( std::vector<double>{ 1.0, std::nan( "" ) }, 5.0 ), error );
  }
}

TEST_CASE( "inverse-CDF sampling", "[pom]" )
{
  SECTION( "a degenerate distribution always returns its only massive index" )
  {
    rng_stream rng( 5 );
    std::vector<double> const p{ 0.0, 0.0, 1.0, 0.0 };
    for ( int i = 0; i < 50; ++i )
      CHECK( sample_action( p, rng ) == 2 );
  }
  SECTION( "frequencies track probabilities within five sigma" )
  {
    rng_stream rng( 99 );
    std::vector<double> const p{ 0.5, 0.3, 0.2 };
    std::array<uint64_t, 3> hits{};
    constexpr uint64_t n = 100000;
    for ( uint64_t i = 0; i < n; ++i )
      ++hits[sample_action( p, rng )];
    for ( size_t i = 0; i < p.size(); ++i )
    {
      double const expected = p[i] * n;
      double const sigma = std::sqrt( n * p[i] * ( 1.0 - p[i] ) );
      CHECK( std::fabs( double( hits[i] ) - expected ) < 5.0 * sigma );
    }
  }
  SECTION( "sampling is deterministic per seed" )
  {
    std::vector<double> const p{ 0.25, 0.25, 0.25, 0.25 };
    rng_stream a( 7 ), b( 7 );
    for ( int i = 0; i < 100; ++i )
      CHECK( sample_action( p, a ) == sample_action( p, b ) );
  }
  SECTION( "invalid distributions are rejected" )
  {
    rng_stream rng( 1 );
    CHECK_THROWS_AS( sample_action( {}, rng ), error );
    CHECK_THROWS_AS( sample_action( { 0.5, 0.6 }, rng ), error );
    CHECK_THROWS_AS( sample_action( { 0.5, 0.4 }, rng ), error );
    CHECK_THROWS_AS( sample_action( { 1.5, -0.5 }, rng ), error );
  }
}

namespace
{

/*! \brief One-step model whose mean deltas make `favorite` the clear argmin */
stat_model_1sa biased_model( uint32_t favorite )
{
  stat_model_1sa m;
  m.target = target_metric::mig_nodes;
  for ( uint32_t r = 0; r < num_recipes; ++r )
  {
    m.mean_delta[r] = r == favorite ? -40.0 : 10.0;
    m.count[r] = 1;
  }
  m.total_count = num_recipes;
  return m;
}

} // namespace

TEST_CASE( "step selection per policy mode", "[pom]" )
{
  prediction_context ctx;
  ctx.past.push_back( { 300, 20, 50, 1800 } );

  SECTION( "uniform mode draws a single recipe and covers the whole grid" )
  {
    policy_config policy; /* uniform */
    rng_stream rng( 3 );
    std::array<uint64_t, num_recipes> hits{};
    for ( int i = 0; i < 3000; ++i )
    {
      auto const step = select_step( policy, nullptr, ctx, rng );
      REQUIRE( step.size() == 1 );
      REQUIRE( step[0] < num_recipes );
      ++hits[step[0]];
    }
    for ( auto h : hits )
      CHECK( h > 0 );
  }
  SECTION( "guided one-step mode concentrates on the predicted argmin at low temperature" )
  {
    prediction_model model = biased_model( 17 );
    policy_config policy{ policy_mode::guided_1sa, 0.5 };
    rng_stream rng( 4 );
    uint64_t favored = 0;
    for ( int i = 0; i < 500; ++i )
    {
      auto const step = select_step( policy, &model, ctx, rng );
      REQUIRE( step.size() == 1 );
      if ( step[0] == 17 )
        ++favored;
    }
    CHECK( favored > 490 ); /* softmax gap of 50 at T=0.5 is essentially deterministic */
  }
  SECTION( "guided two-step mode returns a committed ordered pair" )
  {
    stat_model_2sa pair_model;
    pair_model.target = target_metric::mig_nodes;
    pair_model.one = biased_model( 0 );
    /* make the pair (12, 25) dominate everything else */
    for ( auto& v : pair_model.pair_mean )
      v = 15.0;
    for ( auto& c : pair_model.pair_count )
      c = 1;
    pair_model.pair_mean[12 * num_recipes + 25] = -60.0;
    prediction_model model = pair_model;
    policy_config policy{ policy_mode::guided_2sa, 0.5 };
    rng_stream rng( 5 );
    uint64_t favored = 0;
    for ( int i = 0; i < 200; ++i )
    {
      auto const step = select_step( policy, &model, ctx, rng );
      REQUIRE( step.size() == 2 );
      REQUIRE( step[0] < num_recipes );
      REQUIRE( step[1] < num_recipes );
      if ( step[0] == 12 && step[1] == 25 )
        ++favored;
    }
    CHECK( favored > 195 );
  }
  SECTION( "mode and model kinds must agree" )
  {
    rng_stream rng( 6 );
    prediction_model one = biased_model( 0 );
    prediction_model two = stat_model_2sa{};
    CHECK_THROWS_AS( select_step( { policy_mode::guided_1sa, 5.0 }, nullptr, ctx, rng ), error );
    CHECK_THROWS_AS( select_step( { policy_mode::guided_2sa, 5.0 }, nullptr, ctx, rng ), error );
    CHECK_THROWS_AS( select_step( { policy_mode::guided_1sa, 5.0 }, &two, ctx, rng ), error );
    CHECK_THROWS_AS( select_step( { policy_mode::guided_2sa, 5.0 }, &one, ctx, rng ), error );
    prediction_context empty;
    CHECK_THROWS_AS( select_step( { policy_mode::guided_1sa, 5.0 }, &one, empty, rng ), error );
  }
  SECTION( "mode names round-trip through to_string" )
  {
    CHECK( std::string( to_string( policy_mode::uniform ) ) == "uniform" );
    CHECK( std::string( to_string( policy_mode::guided_1sa ) ) == "1sa" );
    CHECK( std::string( to_string( policy_mode::guided_2sa ) ) == "2sa" );
  }
}
