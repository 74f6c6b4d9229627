/*!
  \file test_recipes.cpp
  \brief Recipe table shape and the behavior of each optimization pass
*/

#include <map>

#include <catch_amalgamated.hpp>

#include <migdse/io/blif.hpp>
#include <migdse/metrics.hpp>
#include <migdse/recipes.hpp>

using namespace migdse;

namespace
{

mig random_mig( uint32_t num_pis, uint32_t gates, uint64_t seed )
{
  rng_stream rng( seed );
  mig m( num_pis );
  std::vector<signal> pool;
  pool.push_back( const0 );
  for ( uint32_t i = 0; i < num_pis; ++i )
    pool.push_back( m.pi( i ) );
  for ( uint32_t g = 0; g < gates; ++g )
  {
    auto pick = [&]() {
      auto s = pool[rng.next_below( pool.size() )];
      return rng.next_below( 2 ) ? !s : s;
    };
    pool.push_back( m.make_maj( pick(), pick(), pick() ) );
  }
  for ( int k = 0; k < 2; ++k )
    m.create_po( rng.next_below( 2 ) ? !pool[pool.size() - 1 - k] : pool[pool.size() - 1 - k] );
  return cleanup_dangling( m );
}

} // namespace

TEST_CASE( "recipe table has the pinned shape", "[recipes]" )
{
  auto const& table = recipe_table();
  REQUIRE( table.size() == 30 );
  for ( uint32_t i = 0; i < 30; ++i )
    CHECK( table[i].id == i );

  std::map<recipe_family, int> counts;
  for ( auto const& r : table )
    ++counts[r.family];
  CHECK( counts[recipe_family::rewrite] == 6 );
  CHECK( counts[recipe_family::resub] == 8 );
  CHECK( counts[recipe_family::refactor] == 8 );
  CHECK( counts[recipe_family::balance] == 2 );
  CHECK( counts[recipe_family::sweep] == 1 );
  CHECK( counts[recipe_family::invert_opt] == 1 );
  CHECK( counts[recipe_family::composite] == 4 );

  /* composites are exactly two passes; atomics exactly one (sweep counts rounds internally) */
  for ( auto const& r : table )
  {
    if ( r.family == recipe_family::composite )
      CHECK( r.passes.size() == 2 );
    else
      CHECK( r.passes.size() == 1 );
  }
}

TEST_CASE( "manifest is stable and hashes consistently", "[recipes]" )
{
  auto const manifest = recipe_manifest();
  CHECK( manifest.find( "recipes.count=30" ) != std::string::npos );
  CHECK( manifest.find( "recipe.0.family=" ) != std::string::npos );
  CHECK( manifest.find( "recipe.29.family=" ) != std::string::npos );
  CHECK( recipe_table_hash() == fnv1a64( manifest ) );
  CHECK( recipe_table_hash() == recipe_table_hash() );
}

TEST_CASE( "every recipe preserves function on random networks", "[recipes]" )
{
  for ( uint64_t seed = 100; seed < 103; ++seed )
  {
    auto const m = random_mig( 6, 30, seed );
    auto const reference = m.simulate_full();
    for ( uint32_t r = 0; r < 30; ++r )
    {
      auto const out = apply_recipe( m, r );
      auto const tts = out.simulate_full();
      REQUIRE( tts.tables.size() == reference.tables.size() );
      for ( size_t k = 0; k < tts.tables.size(); ++k )
      {
        INFO( "recipe " << r << " seed " << seed << " output " << k );
        CHECK( tts.tables[k] == reference.tables[k] );
      }
    }
  }
}

TEST_CASE( "recipes are deterministic and total", "[recipes]" )
{
  auto const m = random_mig( 6, 25, 777 );
  for ( uint32_t r : { 0u, 7u, 15u, 22u, 24u, 25u, 27u } )
  {
    auto const once = apply_recipe( m, r );
    auto const twice = apply_recipe( m, r );
    CHECK( write_blif( once ) == write_blif( twice ) );
  }

  SECTION( "empty network is a fixpoint for the whole table" )
  {
    mig empty( 2 );
    empty.create_po( const0 );
    for ( uint32_t r = 0; r < 30; ++r )
      CHECK( apply_recipe( empty, r ).node_count() == 0 );
  }
  SECTION( "recipe id out of range" )
  {
    CHECK_THROWS_AS( apply_recipe( m, 30 ), error );
  }
}

TEST_CASE( "rewriting reduces a distributivity-redundant cone", "[recipes]" )
{
  /* maj(x,y,maj(u,v,z)) vs maj(maj(x,y,u), maj(x,y,v), z): right form has one
   * node more; rewriting in reduce direction must find the 2-node form. */
  mig m( 5 );
  auto const x = m.pi( 0 ), y = m.pi( 1 ), u = m.pi( 2 ), v = m.pi( 3 ), z = m.pi( 4 );
  auto const a = m.make_maj( x, y, u );
  auto const b = m.make_maj( x, y, v );
  m.create_po( m.make_maj( a, b, z ) );
  auto const before = m.node_count();
  REQUIRE( before == 3 );
  auto const reference = m.simulate_full();

  auto const out = apply_recipe( m, 4 ); /* rewrite, all rules, area-strict */
  CHECK( out.node_count() < before );
  CHECK( out.simulate_full().tables[0] == reference.tables[0] );

  SECTION( "area-strict rewriting never increases size" )
  {
    for ( uint64_t seed = 50; seed < 54; ++seed )
    {
      auto const c = random_mig( 6, 30, seed );
      for ( uint32_t r : { 0u, 2u, 4u } )
        CHECK( apply_recipe( c, r ).node_count() <= c.node_count() );
    }
  }
}

TEST_CASE( "resubstitution removes a functional duplicate", "[recipes]" )
{
  /* f2 recomputes f1's AND through OR-of-complements; structural hashing
   * cannot see it, resubstitution's window simulation can. */
  mig m( 3 );
  auto const x = m.pi( 0 ), y = m.pi( 1 ), z = m.pi( 2 );
  auto const f1 = m.make_and( x, y );
  auto const f2 = !m.make_or( !x, !y );
  auto const g = m.make_maj( f1, z, m.make_and( f2, z ) );
  m.create_po( g );
  auto const before = m.node_count();
  auto const reference = m.simulate_full();

  auto const out = apply_recipe( m, 9 ); /* resub, 8 leaves, 16 divisors */
  CHECK( out.node_count() < before );
  CHECK( out.simulate_full().tables[0] == reference.tables[0] );
}

TEST_CASE( "refactoring compresses a wasteful conjunction cone", "[recipes]" )
{
  /* maj(xy, xz, yz) computes x AND y AND z with 4 nodes; two suffice */
  mig m( 3 );
  auto const x = m.pi( 0 ), y = m.pi( 1 ), z = m.pi( 2 );
  m.create_po( m.make_maj( m.make_and( x, y ), m.make_and( x, z ), m.make_and( y, z ) ) );
  REQUIRE( m.node_count() == 4 );
  auto const reference = m.simulate_full();

  auto const out = apply_recipe( m, 14 ); /* refactor, 4 cone inputs, area-strict */
  CHECK( out.node_count() <= 2 );
  CHECK( out.simulate_full().tables[0] == reference.tables[0] );

  SECTION( "second application is a fixpoint" )
  {
    auto const again = apply_recipe( out, 14 );
    CHECK( again.node_count() == out.node_count() );
  }
}

TEST_CASE( "balancing reduces the depth of a leaning chain", "[recipes]" )
{
  mig m( 5 );
  auto f = m.make_and( m.pi( 0 ), m.pi( 1 ) );
  for ( uint32_t i = 2; i < 5; ++i )
    f = m.make_and( f, m.pi( i ) );
  m.create_po( f );
  REQUIRE( m.depth() == 4 );
  auto const reference = m.simulate_full();

  auto const out = apply_recipe( m, 22 ); /* balance, strict */
  CHECK( out.depth() <= 3 );
  CHECK( out.simulate_full().tables[0] == reference.tables[0] );

  SECTION( "depth never increases on random networks" )
  {
    for ( uint64_t seed = 60; seed < 64; ++seed )
    {
      auto const c = random_mig( 6, 30, seed );
      CHECK( apply_recipe( c, 22 ).depth() <= c.depth() );
      CHECK( apply_recipe( c, 23 ).depth() <= c.depth() );
    }
  }
}

TEST_CASE( "sweeping merges structurally distinct functional twins", "[recipes]" )
{
  mig m( 3 );
  auto const x = m.pi( 0 ), y = m.pi( 1 ), z = m.pi( 2 );
  auto const f1 = m.make_and( x, y );
  /* maj(x, y, x∧y) ≡ x∧y, but the redundant fanin defeats structural hashing */
  auto const f2 = m.make_maj( x, y, f1 );
  m.create_po( m.make_maj( f1, f2, z ) );
  auto const before = m.node_count();
  REQUIRE( before == 3 );
  auto const reference = m.simulate_full();

  auto const out = apply_recipe( m, 24 );
  CHECK( out.node_count() < before );
  CHECK( out.simulate_full().tables[0] == reference.tables[0] );

  SECTION( "idempotence" )
  {
    CHECK( apply_recipe( out, 24 ).node_count() == out.node_count() );
  }
}

TEST_CASE( "inverter optimization strips a fully complemented node", "[recipes]" )
{
  mig m( 3 );
  auto const x = m.pi( 0 ), y = m.pi( 1 ), z = m.pi( 2 );
  auto const f = m.make_maj( !x, !y, !z );
  m.create_po( !f );
  auto const before = compute_metrics( m );

  auto const out = apply_recipe( m, 25 );
  auto const after = compute_metrics( out );
  CHECK( after.mig_nodes == before.mig_nodes );
  CHECK( after.depth == before.depth );
  CHECK( after.transistors <= before.transistors );
  /* the dual form has no complemented fanins and no complemented output */
  CHECK( after.transistors == 12 );

  SECTION( "transistor estimate never increases across the corpus" )
  {
    for ( uint64_t seed = 70; seed < 76; ++seed )
    {
      auto const c = random_mig( 6, 30, seed );
      CHECK( compute_metrics( apply_recipe( c, 25 ) ).transistors
             <= compute_metrics( c ).transistors );
    }
  }
}

TEST_CASE( "composite recipes equal their two passes in sequence", "[recipes]" )
{
  auto const m = random_mig( 6, 30, 4242 );
  auto const& table = recipe_table();

  /* id 26 = sweep then area-strict full rewriting */
  auto const direct = apply_recipe( m, 26 );
  auto const stepwise = apply_recipe( apply_recipe( m, 24 ), 4 );
  CHECK( write_blif( direct ) == write_blif( stepwise ) );
  CHECK( table[26].family == recipe_family::composite );
}
