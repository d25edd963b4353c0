#pragma once

#include "hstab/bar_homology.hpp"
#include "hstab/cli.hpp"
#include "hstab/congruences.hpp"
#include "hstab/errors.hpp"
#include "hstab/fold.hpp"
#include "hstab/group.hpp"
#include "hstab/group_spec.hpp"
#include "hstab/groups.hpp"
#include "hstab/hurwitz.hpp"
#include "hstab/lattice.hpp"
#include "hstab/moves.hpp"
#include "hstab/orbits.hpp"
#include "hstab/report_io.hpp"
#include "hstab/verification.hpp"
