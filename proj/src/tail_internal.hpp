#pragma once

namespace rmedge::detail {

double kernel_Y_residue(int n, double delta, double u, int bits, int nodes);

}  // namespace rmedge::detail
