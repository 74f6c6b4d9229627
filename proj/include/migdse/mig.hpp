/*!
  \file mig.hpp
  \brief Majority-inverter graph arena with structural hashing and simulation
*/

#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "truth_table.hpp"

namespace migdse
{

/*! \brief One bit-packed truth table per primary output */
struct truth_table_set
{
  std::vector<truth_table> tables;
  uint32_t num_vars{ 0 };
};

/*! \brief Equivalence-check verdict; NotEquivalent carries a PI assignment */
struct equivalence_verdict
{
  enum class kind_t
  {
    equivalent,
    not_equivalent,
    probably_equivalent
  };

  kind_t kind;
  std::optional<std::vector<bool>> counterexample;

  bool is_equivalent() const { return kind == kind_t::equivalent; }
  bool is_not_equivalent() const { return kind == kind_t::not_equivalent; }
};

/*! \brief Majority-inverter graph.
 *
 * The node arena is topologically ordered by construction: every fanin id is
 * strictly smaller than the node's own id, so acyclicity holds everywhere and
 * an ascending id scan is a topological traversal. Structurally identical
 * nodes (up to the self-duality MAJ(a,b,c) = !MAJ(!a,!b,!c)) are shared via
 * the structural hash.
 */
class mig
{
public:
  struct node_data
  {
    std::array<signal, 3> fanins{};
    uint32_t level{ 0 };
  };

  explicit mig( uint32_t num_pis = 0 )
      : nodes_( 1 + num_pis ), num_pis_( num_pis )
  {
  }

  uint32_t size() const { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t num_pis() const { return num_pis_; }
  uint32_t num_pos() const { return static_cast<uint32_t>( pos_.size() ); }
  uint32_t num_gates() const { return size() - 1 - num_pis_; }

  bool is_constant( uint32_t n ) const { return n == 0; }
  bool is_pi( uint32_t n ) const { return n >= 1 && n <= num_pis_; }
  bool is_gate( uint32_t n ) const { return n > num_pis_ && n < size(); }
  uint32_t first_gate() const { return num_pis_ + 1; }

  signal pi( uint32_t index ) const
  {
    if ( index >= num_pis_ )
      throw structural_error( "primary input index out of range" );
    return signal( 1 + index, false );
  }

  std::array<signal, 3> const& fanins( uint32_t n ) const
  {
    assert( is_gate( n ) );
    return nodes_[n].fanins;
  }

  uint32_t level( uint32_t n ) const { return nodes_[n].level; }

  std::vector<signal> const& pos() const { return pos_; }
  signal po( uint32_t index ) const { return pos_.at( index ); }

  void create_po( signal f )
  {
    check_signal( f );
    pos_.push_back( f );
  }

  void set_po( uint32_t index, signal f )
  {
    check_signal( f );
    pos_.at( index ) = f;
  }

  std::vector<std::string>& pi_names() { return pi_names_; }
  std::vector<std::string>& po_names() { return po_names_; }
  std::vector<std::string> const& pi_names() const { return pi_names_; }
  std::vector<std::string> const& po_names() const { return po_names_; }

  /*! \brief Creates (or finds) the node for MAJ(a, b, c).
   *
   * Applies fanin sorting, the majority axioms MAJ(x,x,y) = x and
   * MAJ(x,!x,y) = y, and a structural-hash lookup that is closed under
   * self-duality: requesting the complemented triple of an existing node
   * returns that node with a complemented output signal.
   */
  signal make_maj( signal a, signal b, signal c )
  {
    check_signal( a );
    check_signal( b );
    check_signal( c );

    std::array<signal, 3> f{ a, b, c };
    std::sort( f.begin(), f.end() );

    /* MAJ(x,x,y) = x; constant collapse is the same rule applied to constants */
    if ( f[0] == f[1] || f[1] == f[2] )
      return f[1];
    /* MAJ(x,!x,y) = y */
    if ( f[0] == !f[1] )
      return f[2];
    if ( f[1] == !f[2] )
      return f[0];

    auto const key = canonical_key( f );
    if ( auto it = strash_.find( key ); it != strash_.end() )
    {
      /* stored polarity may be the dual of the requested one */
      bool complemented = nodes_[it->second].fanins != f;
      return signal( it->second, complemented );
    }

    uint32_t lvl = 0;
    for ( auto const& s : f )
      lvl = std::max( lvl, nodes_[s.node()].level );

    uint32_t id = size();
    nodes_.push_back( node_data{ f, lvl + 1 } );
    strash_.emplace( key, id );
    return signal( id, false );
  }

  //! AND(a, b) as MAJ(a, b, 0)
  signal make_and( signal a, signal b ) { return make_maj( a, b, const0 ); }
  //! OR(a, b) as MAJ(a, b, 1)
  signal make_or( signal a, signal b ) { return make_maj( a, b, const1 ); }
  //! XOR(a, b) built from two levels of AND/OR
  signal make_xor( signal a, signal b )
  {
    return make_and( make_or( a, b ), !make_and( a, b ) );
  }
  //! if-then-else MUX(sel, then, else)
  signal make_mux( signal sel, signal t, signal e )
  {
    return make_or( make_and( sel, t ), make_and( !sel, e ) );
  }

  /*! \brief Arena watermark for tentative construction */
  uint32_t mark() const { return size(); }

  /*! \brief Discards all nodes allocated at or after `watermark`.
   *
   * Only valid while no PO or surviving node refers to the discarded range.
   */
  void rollback( uint32_t watermark )
  {
    assert( watermark >= first_gate() || watermark == size() );
    while ( size() > watermark )
    {
      strash_.erase( canonical_key( nodes_.back().fanins ) );
      nodes_.pop_back();
    }
  }

  /*! \brief Flags of PO-reachable nodes (constant excluded unless referenced) */
  std::vector<bool> reachable() const
  {
    std::vector<bool> mark( size(), false );
    std::vector<uint32_t> stack;
    for ( auto const& po : pos_ )
    {
      if ( !mark[po.node()] )
      {
        mark[po.node()] = true;
        stack.push_back( po.node() );
      }
    }
    while ( !stack.empty() )
    {
      uint32_t n = stack.back();
      stack.pop_back();
      if ( !is_gate( n ) )
        continue;
      for ( auto const& f : nodes_[n].fanins )
      {
        if ( !mark[f.node()] )
        {
          mark[f.node()] = true;
          stack.push_back( f.node() );
        }
      }
    }
    return mark;
  }

  //! number of PO-reachable majority nodes (constants and PIs excluded)
  uint32_t node_count() const
  {
    auto mark = reachable();
    uint32_t count = 0;
    for ( uint32_t n = first_gate(); n < size(); ++n )
      if ( mark[n] )
        ++count;
    return count;
  }

  //! maximum PO-reachable level; PIs and constants are level 0
  uint32_t depth() const
  {
    uint32_t d = 0;
    for ( auto const& po : pos_ )
      d = std::max( d, nodes_[po.node()].level );
    return d;
  }

  /*! \brief Re-phases the given nodes by self-duality.
   *
   * For every flagged node the stored fanin triple is replaced by its dual and
   * every edge whose source is that node (gate fanins and POs) toggles its
   * complement flag. Function, node count, and depth are all unchanged. The
   * structural hash is rebuilt.
   */
  void apply_phase_flips( std::vector<bool> const& flip )
  {
    assert( flip.size() == size() );
    for ( uint32_t n = first_gate(); n < size(); ++n )
    {
      auto& f = nodes_[n].fanins;
      for ( auto& s : f )
      {
        bool c = s.complemented() ^ ( flip[s.node()] && !is_constant( s.node() ) ) ^ flip[n];
        s = signal( s.node(), c );
      }
      std::sort( f.begin(), f.end() );
    }
    for ( auto& po : pos_ )
      po = signal( po.node(), po.complemented() ^ ( flip[po.node()] && !is_constant( po.node() ) ) );

    strash_.clear();
    for ( uint32_t n = first_gate(); n < size(); ++n )
    {
      auto inserted = strash_.emplace( canonical_key( nodes_[n].fanins ), n ).second;
      assert( inserted );
      (void)inserted;
    }
  }

  /*! \brief Exhaustive simulation of all POs; requires num_pis <= 16 */
  truth_table_set simulate_full() const
  {
    if ( num_pis_ > 16 )
      throw capacity_error( "simulate_full supports at most 16 primary inputs" );

    std::vector<truth_table> node_tt( size() );
    node_tt[0] = truth_table::constant0( num_pis_ );
    for ( uint32_t i = 0; i < num_pis_; ++i )
      node_tt[1 + i] = truth_table::elementary( num_pis_, i );
    for ( uint32_t n = first_gate(); n < size(); ++n )
    {
      auto const& f = nodes_[n].fanins;
      auto in = [&]( signal s ) {
        auto t = node_tt[s.node()];
        if ( s.complemented() )
          t.complement();
        return t;
      };
      node_tt[n] = truth_table::maj3( in( f[0] ), in( f[1] ), in( f[2] ) );
    }

    truth_table_set result;
    result.num_vars = num_pis_;
    result.tables.reserve( pos_.size() );
    for ( auto const& po : pos_ )
    {
      auto t = node_tt[po.node()];
      if ( po.complemented() )
        t.complement();
      result.tables.push_back( std::move( t ) );
    }
    return result;
  }

  /*! \brief Word-parallel node values for one 64-assignment round.
   *
   * `pi_words[i]` carries 64 values of PI i; returns the uncomplemented value
   * word of every node, indexed by node id.
   */
  std::vector<uint64_t> simulate_node_words( std::vector<uint64_t> const& pi_words ) const
  {
    assert( pi_words.size() == num_pis_ );
    std::vector<uint64_t> w( size() );
    w[0] = 0;
    for ( uint32_t i = 0; i < num_pis_; ++i )
      w[1 + i] = pi_words[i];
    for ( uint32_t n = first_gate(); n < size(); ++n )
    {
      auto const& f = nodes_[n].fanins;
      auto in = [&]( signal s ) { return s.complemented() ? ~w[s.node()] : w[s.node()]; };
      uint64_t a = in( f[0] ), b = in( f[1] ), c = in( f[2] );
      w[n] = ( a & b ) | ( a & c ) | ( b & c );
    }
    return w;
  }

  /*! \brief One 64-assignment word-parallel simulation round; one word per PO */
  std::vector<uint64_t> simulate_words( std::vector<uint64_t> const& pi_words ) const
  {
    auto w = simulate_node_words( pi_words );
    std::vector<uint64_t> out;
    out.reserve( pos_.size() );
    for ( auto const& po : pos_ )
      out.push_back( po.complemented() ? ~w[po.node()] : w[po.node()] );
    return out;
  }

  /*! \brief Stable content hash over the reachable structure (provenance, caching) */
  uint64_t structure_hash() const
  {
    auto mark = reachable();
    uint64_t h = splitmix64( ( uint64_t( num_pis_ ) << 32 ) | pos_.size() );
    for ( uint32_t n = first_gate(); n < size(); ++n )
    {
      if ( !mark[n] )
        continue;
      auto const& f = nodes_[n].fanins;
      h = splitmix64( h ^ ( ( uint64_t( f[0].lit ) << 42 ) | ( uint64_t( f[1].lit ) << 21 ) | f[2].lit ) );
      h = splitmix64( h ^ n );
    }
    for ( auto const& po : pos_ )
      h = splitmix64( h ^ po.lit );
    return h;
  }

private:
  using key_t = std::array<uint32_t, 3>;

  struct key_hash
  {
    size_t operator()( key_t const& k ) const
    {
      return splitmix64( ( uint64_t( k[0] ) << 42 ) ^ ( uint64_t( k[1] ) << 21 ) ^ k[2] ^ ( uint64_t( k[2] ) << 47 ) );
    }
  };

  //! lexicographic minimum of the sorted triple and its sorted dual
  static key_t canonical_key( std::array<signal, 3> const& f )
  {
    key_t t{ f[0].lit, f[1].lit, f[2].lit };
    key_t d{ f[0].lit ^ 1u, f[1].lit ^ 1u, f[2].lit ^ 1u };
    std::sort( d.begin(), d.end() );
    return std::min( t, d );
  }

  void check_signal( signal s ) const
  {
    if ( s.node() >= size() )
      throw structural_error( "signal refers to a non-existing node" );
  }

  std::vector<node_data> nodes_;
  uint32_t num_pis_;
  std::vector<signal> pos_;
  std::vector<std::string> pi_names_, po_names_;
  std::unordered_map<key_t, uint32_t, key_hash> strash_;
};

/*! \brief Copies only the PO-reachable part into a freshly indexed network.
 *
 * PO functions are unchanged; node ids are re-assigned densely in ascending
 * topological order.
 */
inline mig cleanup_dangling( mig const& m )
{
  mig out( m.num_pis() );
  out.pi_names() = m.pi_names();
  out.po_names() = m.po_names();

  auto mark = m.reachable();
  std::vector<signal> map( m.size() );
  map[0] = const0;
  for ( uint32_t i = 0; i < m.num_pis(); ++i )
    map[1 + i] = out.pi( i );
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& f = m.fanins( n );
    auto in = [&]( signal s ) { return map[s.node()] ^ s.complemented(); };
    map[n] = out.make_maj( in( f[0] ), in( f[1] ), in( f[2] ) );
  }
  for ( auto const& po : m.pos() )
    out.create_po( map[po.node()] ^ po.complemented() );
  return out;
}

/*! \brief Functional equivalence of two networks with matching interfaces.
 *
 * Up to 14 PIs the comparison is exhaustive and a mismatch yields a concrete
 * counterexample assignment. Above that, `patterns` pseudo-random 64-bit
 * simulation rounds are compared and agreement yields ProbablyEquivalent.
 */
inline equivalence_verdict check_equivalence( mig const& a, mig const& b, uint32_t patterns = 256 )
{
  if ( a.num_pis() != b.num_pis() || a.num_pos() != b.num_pos() )
    throw structural_error( "equivalence check requires identical PI/PO counts" );

  if ( a.num_pis() <= 14 )
  {
    auto ta = a.simulate_full();
    auto tb = b.simulate_full();
    for ( uint32_t k = 0; k < a.num_pos(); ++k )
    {
      if ( auto row = ta.tables[k].first_difference( tb.tables[k] ); row >= 0 )
      {
        std::vector<bool> cex( a.num_pis() );
        for ( uint32_t i = 0; i < a.num_pis(); ++i )
          cex[i] = ( row >> i ) & 1;
        return { equivalence_verdict::kind_t::not_equivalent, cex };
      }
    }
    return { equivalence_verdict::kind_t::equivalent, std::nullopt };
  }

  constexpr uint64_t equivalence_seed = 0x455175697643686bull;
  for ( uint32_t round = 0; round < patterns; ++round )
  {
    std::vector<uint64_t> pi_words( a.num_pis() );
    for ( uint32_t i = 0; i < a.num_pis(); ++i )
      pi_words[i] = splitmix64( derive_seed( equivalence_seed, { round, i } ) );
    auto wa = a.simulate_words( pi_words );
    auto wb = b.simulate_words( pi_words );
    for ( uint32_t k = 0; k < a.num_pos(); ++k )
    {
      if ( uint64_t diff = wa[k] ^ wb[k]; diff )
      {
        int bit = __builtin_ctzll( diff );
        std::vector<bool> cex( a.num_pis() );
        for ( uint32_t i = 0; i < a.num_pis(); ++i )
          cex[i] = ( pi_words[i] >> bit ) & 1;
        return { equivalence_verdict::kind_t::not_equivalent, cex };
      }
    }
  }
  return { equivalence_verdict::kind_t::probably_equivalent, std::nullopt };
}

} // namespace migdse
