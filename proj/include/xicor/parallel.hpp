#pragma once

namespace xicor {

/// Number of OpenMP threads used by the parallel kernels.
int max_threads();

/// Sets the thread count for subsequent parallel kernels; values < 1 restore
/// the runtime default. Results never depend on this setting.
void set_num_threads(int threads);

}  // namespace xicor
