#pragma once

// Umbrella header.

#include "cremona/bimonoid.hpp"
#include "cremona/chain.hpp"
#include "cremona/documents.hpp"
#include "cremona/errors.hpp"
#include "cremona/fields.hpp"
#include "cremona/linalg.hpp"
#include "cremona/linear_system.hpp"
#include "cremona/monoid_cremona.hpp"
#include "cremona/multipoly.hpp"
#include "cremona/obstruction.hpp"
#include "cremona/projective.hpp"
#include "cremona/rng.hpp"
