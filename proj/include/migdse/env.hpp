/*!
  \file env.hpp
  \brief The optimization-environment contract and its circuit-backed implementation

  An environment is the mutable world a search chain acts on: it can be
  snapshotted, restored, advanced by applying a recipe, and measured. The
  interface is a concept so the search engine works identically over the real
  circuit environment below and the closed-form synthetic one used in tests.

  `mig_environment` wraps a network with two shared, thread-safe caches: a
  metrics cache keyed by structure hash, and a bounded (state, recipe) →
  result memo. Both are pure accelerators — recipes are deterministic, so
  cache hits can never change an outcome, only skip recomputation. Restarted
  chains re-walk identical prefixes constantly, which makes these caches the
  difference between minutes and hours on repeated-run experiments.
*/

#pragma once

#include <concepts>
#include <cstdint>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

#include "common.hpp"
#include "metrics.hpp"
#include "mig.hpp"
#include "recipes.hpp"

namespace migdse
{

/*! \brief Contract every optimization environment satisfies */
template<typename E>
concept environment = std::copyable<E> && requires( E e, E const ce, uint32_t recipe, uint64_t seed ) {
  typename E::snapshot_type;
  { ce.snapshot() } -> std::convertible_to<typename E::snapshot_type>;
  { e.restore( std::declval<typename E::snapshot_type const&>() ) };
  { e.apply( recipe ) };
  { ce.current_metrics() } -> std::convertible_to<metric_vector>;
  { e.reseed( seed ) };
};

/*! \brief Circuit-backed environment: state is a network, actions are recipes */
class mig_environment
{
public:
  using snapshot_type = mig;

  explicit mig_environment( mig m )
      : current_( std::move( m ) ), cache_( std::make_shared<shared_cache>() )
  {
  }

  mig snapshot() const { return current_; }

  void restore( mig const& state )
  {
    current_ = state;
    hash_valid_ = false;
  }

  /*! \brief Applies one recipe; memoized on (state hash, recipe) */
  void apply( uint32_t recipe )
  {
    if ( recipe >= num_recipes )
      throw error( "recipe id " + std::to_string( recipe ) + " out of range" );
    uint64_t const key = derive_seed( state_hash(), { recipe } );
    {
      std::lock_guard<std::mutex> lock( cache_->mutex );
      auto it = cache_->apply_memo.find( key );
      if ( it != cache_->apply_memo.end() )
      {
        current_ = it->second;
        hash_valid_ = false;
        return;
      }
    }
    mig next = apply_recipe( current_, recipe );
    {
      std::lock_guard<std::mutex> lock( cache_->mutex );
      if ( cache_->apply_memo.size() >= apply_memo_limit )
        cache_->apply_memo.clear();
      cache_->apply_memo.emplace( key, next );
    }
    current_ = std::move( next );
    hash_valid_ = false;
  }

  metric_vector current_metrics() const
  {
    uint64_t const h = state_hash();
    {
      std::lock_guard<std::mutex> lock( cache_->mutex );
      auto it = cache_->metrics_memo.find( h );
      if ( it != cache_->metrics_memo.end() )
        return it->second;
    }
    auto const v = compute_metrics( current_ );
    std::lock_guard<std::mutex> lock( cache_->mutex );
    if ( cache_->metrics_memo.size() >= metrics_memo_limit )
      cache_->metrics_memo.clear();
    cache_->metrics_memo.emplace( h, v );
    return v;
  }

  void reseed( uint64_t ) {} //!< recipes are deterministic; nothing to seed

  mig const& network() const { return current_; }

private:
  static constexpr size_t apply_memo_limit = 8192;
  static constexpr size_t metrics_memo_limit = 1u << 20;

  struct shared_cache
  {
    std::mutex mutex;
    std::unordered_map<uint64_t, mig> apply_memo;
    std::unordered_map<uint64_t, metric_vector> metrics_memo;
  };

  uint64_t state_hash() const
  {
    if ( !hash_valid_ )
    {
      hash_ = current_.structure_hash();
      hash_valid_ = true;
    }
    return hash_;
  }

  mig current_;
  std::shared_ptr<shared_cache> cache_; //!< shared by copies; guarded by its mutex
  mutable uint64_t hash_{ 0 };
  mutable bool hash_valid_{ false };
};

static_assert( environment<mig_environment> );

} // namespace migdse
