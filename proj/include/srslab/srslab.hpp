#pragma once

#include "srslab/atomdata.hpp"
#include "srslab/constants.hpp"
#include "srslab/couplings.hpp"
#include "srslab/errors.hpp"
#include "srslab/expsim.hpp"
#include "srslab/fitting.hpp"
#include "srslab/gates.hpp"
#include "srslab/geometry.hpp"
#include "srslab/halfint.hpp"
#include "srslab/lightshift.hpp"
#include "srslab/raman.hpp"
#include "srslab/scattering.hpp"
#include "srslab/wigner.hpp"
