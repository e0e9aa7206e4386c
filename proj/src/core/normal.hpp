#pragma once

namespace robggm {

// Standard normal quantile, Wichura's algorithm AS 241 (PPND16 variant).
// Relative error below 1e-15 over (1e-300, 1 - 1e-16); callers here need
// 1e-9 on (1e-10, 1 - 1e-10). Throws on p outside (0, 1).
double normal_quantile(double p);

}  // namespace robggm
