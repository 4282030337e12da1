#pragma once

namespace mcpc {

/// Caps OpenMP worker threads for subsequent parallel kernels; 0 keeps the default.
void set_jobs(int jobs);
int max_jobs();

}  // namespace mcpc
