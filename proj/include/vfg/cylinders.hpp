#pragma once

#include <string>
#include <vector>

#include "analysis.hpp"
#include "splittings.hpp"

/**
 * @file cylinders.hpp
 * @brief Quotient of the tree of cylinders of a splitting whose edge groups
 *        all have the same order.
 *
 * Cylinder vertices carry normalizers, which are usually infinite, so they
 * are kept as normalizer presentations instead of finite vertex groups.
 */

namespace vfg
{

struct CylinderTree
{
  // a vertex of the input lying in at least two cylinders
  struct Point
  {
    int vertex;
    GroupPtr group;
  };

  struct CylinderVertex
  {
    int cylinder;  // index into the CylinderDecomposition
    NormalizerInfo normalizer;
  };

  struct Edge
  {
    int point;
    int cylinder_vertex;
    Subgrp stabilizer; // edge group of the cylinder at this vertex
    Subgrp group;      // its normalizer in the vertex group
  };

  CylinderDecomposition decomposition;
  std::vector<Point> points;
  std::vector<CylinderVertex> cylinder_vertices;
  std::vector<Edge> edges;
};

// throws MixedEdgeOrders like cylinders()
CylinderTree tree_of_cylinders(GraphOfGroups const &g);

std::string export_dot(GraphOfGroups const &g, CylinderTree const &t);

} // namespace vfg
