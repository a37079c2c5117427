#include "hmcone/kernels.hpp"

#include <omp.h>

namespace hmcone::kernels {

int max_threads() { return omp_get_max_threads(); }

}  // namespace hmcone::kernels
