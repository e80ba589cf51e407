#pragma once

namespace specclust {

/// Caps worker threads used by parallel loops. n <= 0 restores the default.
/// Numerical results never depend on this setting.
void set_num_threads(int n);
int num_threads();

} // namespace specclust
