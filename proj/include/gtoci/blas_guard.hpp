#pragma once

namespace gtoci {

/// OpenBLAS 0.3.20 selects a Cooperlake DGEMM kernel that returns wrong
/// products on some AVX-512 hosts.  When that kernel is active and the user
/// has not chosen one, re-execute the program with OPENBLAS_CORETYPE=SkylakeX.
/// Call first thing in main; returns normally when no action is needed.
void ensure_reliable_blas(int argc, char** argv);

/// Name of the active OpenBLAS kernel, lower case.
const char* blas_core_name();

}  // namespace gtoci
