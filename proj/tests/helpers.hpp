#pragma once

#include <string>

#include "srslab/atomdata.hpp"

namespace testutil {

inline std::string data_dir() { return SRSLAB_DATA_DIR; }

inline const srslab::SpeciesData& ba137() {
    static const srslab::SpeciesData sp =
        srslab::load_species(data_dir() + "/ba137.species");
    return sp;
}

inline const srslab::SpeciesData& sr88() {
    static const srslab::SpeciesData sp =
        srslab::load_species(data_dir() + "/sr88.species");
    return sp;
}

inline srslab::HyperfineState state(const std::string& level, srslab::HalfInt f,
                                    srslab::HalfInt m) {
    return {level, f, m};
}

} // namespace testutil
