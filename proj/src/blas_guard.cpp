#include "gtoci/blas_guard.hpp"

#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

extern "C" char* openblas_get_corename(void);

namespace gtoci {

const char* blas_core_name() { return openblas_get_corename(); }

void ensure_reliable_blas(int argc, char** argv) {
  (void)argc;
  if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
  std::string core = blas_core_name();
  for (auto& ch : core) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (core != "cooperlake") return;
  setenv("OPENBLAS_CORETYPE", "SkylakeX", 1);
  execv("/proc/self/exe", argv);
  std::cerr << "warning: could not re-execute with OPENBLAS_CORETYPE=SkylakeX (" << std::strerror(errno)
            << "); dense linear algebra may be unreliable\n";
}

}  // namespace gtoci
