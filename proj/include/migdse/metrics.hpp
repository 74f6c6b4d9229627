/*!
  \file metrics.hpp
  \brief The four size-related circuit metrics tracked during exploration

  All metrics are pure functions of the output-reachable subgraph, integer
  valued and deterministic. The transistor figure is a structural cost model:
  12 per majority node with three non-constant fanins, 6 per node degenerated
  by a constant fanin (a 2-input AND/OR shape), plus 2 per complemented edge
  whose source is a primary input or a node (a complemented constant costs
  nothing) and 2 per complemented output edge. It rewards node elimination,
  degenerate-node simplification and inverter minimization alike.
*/

#pragma once

#include <cstdint>
#include <string>

#include "lut_map.hpp"
#include "mig.hpp"

namespace migdse
{

/*! \brief Size metrics of one circuit state */
struct metric_vector
{
  int64_t mig_nodes{ 0 };
  int64_t depth{ 0 };
  int64_t lut6{ 0 };
  int64_t transistors{ 0 };

  bool operator==( metric_vector const& other ) const = default;
};

inline std::string to_string( metric_vector const& v )
{
  return "(nodes=" + std::to_string( v.mig_nodes ) + ", depth=" + std::to_string( v.depth ) +
         ", lut6=" + std::to_string( v.lut6 ) + ", transistors=" + std::to_string( v.transistors ) + ")";
}

/*! \brief Structural transistor cost model (see file brief) */
inline int64_t transistor_estimate( mig const& m )
{
  auto const reach = m.reachable();
  int64_t cost = 0;
  for ( uint32_t n = m.first_gate(); n < m.size(); ++n )
  {
    if ( !reach[n] )
      continue;
    bool has_const = false;
    for ( auto const& f : m.fanins( n ) )
    {
      if ( f.node() == 0 )
        has_const = true;
      else if ( f.complemented() )
        cost += 2;
    }
    cost += has_const ? 6 : 12;
  }
  for ( auto const& po : m.pos() )
  {
    if ( po.complemented() )
      cost += 2;
  }
  return cost;
}

/*! \brief Assembles all four metrics of a circuit */
inline metric_vector compute_metrics( mig const& m )
{
  metric_vector v;
  v.mig_nodes = m.node_count();
  v.depth = m.depth();
  v.lut6 = static_cast<int64_t>( map_lut6( m ) );
  v.transistors = transistor_estimate( m );
  return v;
}

/*! \brief Index access for the canonical metric order */
inline int64_t metric_component( metric_vector const& v, uint32_t index )
{
  switch ( index )
  {
  case 0:
    return v.mig_nodes;
  case 1:
    return v.depth;
  case 2:
    return v.lut6;
  case 3:
    return v.transistors;
  default:
    throw error( "metric component index out of range" );
  }
}

/*! \brief Names of the exploration target metrics */
enum class target_metric
{
  mig_nodes,
  depth,
  lut6,
  transistors
};

inline char const* to_string( target_metric t )
{
  switch ( t )
  {
  case target_metric::mig_nodes:
    return "mig_nodes";
  case target_metric::depth:
    return "depth";
  case target_metric::lut6:
    return "lut6";
  case target_metric::transistors:
    return "transistors";
  }
  return "";
}

/*! \brief Parses a metric name; throws on unknown names */
inline target_metric parse_target_metric( std::string const& name )
{
  if ( name == "mig_nodes" )
    return target_metric::mig_nodes;
  if ( name == "depth" )
    return target_metric::depth;
  if ( name == "lut6" )
    return target_metric::lut6;
  if ( name == "transistors" )
    return target_metric::transistors;
  throw error( "unknown metric name: " + name );
}

/*! \brief The target's value inside a metric vector */
inline int64_t target_value( metric_vector const& v, target_metric t )
{
  return metric_component( v, static_cast<uint32_t>( t ) );
}

} // namespace migdse
