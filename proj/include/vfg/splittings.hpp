#pragma once

#include <string>
#include <vector>

#include "gog.hpp"

/**
 * @file splittings.hpp
 * @brief Reduction, m-JSJ collapse, slide moves and cylinders.
 */

namespace vfg
{

struct Reduction
{
  GraphOfGroups result;
  WordHom translation; // input -> result, an isomorphism
  WordHom back;        // result -> input, the inverse of translation
};

// collapses non-loop edges whose group maps onto an endpoint group,
// smallest edge id first, until none is left
Reduction reduce_with_translation(GraphOfGroups const &g);
GraphOfGroups reduce(GraphOfGroups const &g);
bool is_reduced(GraphOfGroups const &g);

// a vertex of an m-JSJ splitting; `graph` is a single finite vertex when
// the factor is finite
struct MFactor
{
  std::string id;
  GraphOfGroups graph;
  bool finite;
  std::vector<int> vertices; // vertices of the reduced input it contains
};

struct MEdge
{
  std::string id;
  int from;
  int to;
  GroupPtr group;
};

struct MJsj
{
  GraphOfGroups reduced;
  std::vector<MFactor> factors;
  std::vector<MEdge> edges;
};

MJsj m_jsj(GraphOfGroups const &g, int m);

// smallest edge order of a reduced Stallings splitting, |G| for finite G
int m_of(GraphOfGroups const &g);

struct SlideMove
{
  int edge;      // moved edge
  int edge_end;  // 0 = from, 1 = to
  int anchor;    // edge slid across
  int anchor_end;
  int conjugator; // element of the shared vertex group
};

struct SlideResult
{
  SlideMove move;
  GraphOfGroups result;  // reduced
  WordHom translation;   // input -> result
};

// the graph obtained by one slide, before re-reduction; throws IllegalStep
// if the move does not apply
GraphOfGroups apply_slide(GraphOfGroups const &g, SlideMove const &move,
                          WordHom *translation = nullptr);

bool slide_applicable(GraphOfGroups const &g, SlideMove const &move);

std::vector<SlideResult> slide_neighbors(GraphOfGroups const &g);

struct Cylinder
{
  std::vector<int> edges;
  int vertex;     // vertex carrying `group`
  Subgrp group;   // the common edge group seen in that vertex group
};

struct CylinderDecomposition
{
  std::vector<int> cylinder_of_edge;
  std::vector<Cylinder> cylinders;
};

CylinderDecomposition cylinders(GraphOfGroups const &g);

} // namespace vfg
