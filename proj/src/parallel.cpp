#include "lexica/parallel.hpp"

#include <cstdlib>
#include <string>

namespace lexica {

unsigned resolve_threads(int requested) {
    if (requested > 0) {
        return static_cast<unsigned>(requested);
    }
    if (const char* env = std::getenv("QBE_LEXICA_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return static_cast<unsigned>(n);
            }
        } catch (const std::logic_error&) {
            // unparsable values fall through to the hardware default
        }
    }
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace lexica
