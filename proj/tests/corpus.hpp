#pragma once

#include <string>
#include <vector>

#include "vfg/gfg.hpp"

inline vfg::GraphOfGroups corpus(std::string const &name)
{ return vfg::load_gfg(std::string(VFG_CORPUS_DIR) + "/" + name + ".gfg"); }

inline std::vector<std::string> corpus_names()
{
  return {"trivial", "psl2z", "psl2z_free_z", "sl2z", "sl2z_amalg_z2xf1",
          "f2xz2", "f2xz2_free_z", "f2xz2_hnn_z2", "z4xf2", "z4xf2_hnn_z4",
          "z4xf2_hnn_c2", "n25x6", "n25x11", "dinf"};
}
