#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "myco/image.hpp"

namespace myco {

// The conductive matrix C: which lattice nodes carry the medium.
struct ConductiveGrid {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> mask;  // 1 = conductive, row-major
  std::string provenance;          // free-form: source file + rule summary

  bool conductive(int r, int c) const { return mask[static_cast<size_t>(r) * cols + c] != 0; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
  size_t node_count() const { return static_cast<size_t>(rows) * cols; }
  size_t conductive_count() const;
};

ConductiveGrid make_grid(int rows, int cols, bool conductive = false);
ConductiveGrid grid_from_mask(const BoolMask& mask, std::string provenance);

// Block-sampling projection: target node (i,j) is conductive iff any source
// pixel in its pre-image rectangle is set. Row pre-image of target row i is
// [floor(i*H/R), ceil((i+1)*H/R)) and likewise for columns, so the rectangles
// tile the source even when dims do not divide evenly.
ConductiveGrid project_to_grid(const BoolMask& mask, int target_rows, int target_cols);

struct ComponentInfo {
  std::vector<int> labels;        // per node; -1 for non-conductive
  std::vector<size_t> sizes;      // indexed by label, dense from 0
  size_t component_count() const { return sizes.size(); }
};

// 4-connectivity labeling (the Laplacian's neighbor graph). Labels are dense
// from 0 in first-encounter (row-major) order.
ComponentInfo connected_components(const ConductiveGrid& grid);

// Versioned text+RLE container (magic "MYCOGRID1"); see save_grid for layout.
void save_grid(const std::string& path, const ConductiveGrid& grid);
ConductiveGrid load_grid(const std::string& path);

// Binary PGM (P5) inspection dump: 0 = non-conductive, 255 = conductive.
void save_grid_pgm(const std::string& path, const ConductiveGrid& grid);

}  // namespace myco
