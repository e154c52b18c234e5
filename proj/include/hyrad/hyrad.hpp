// hyrad.hpp — umbrella header.

#pragma once

#include "io.hpp"
#include "liouville.hpp"
#include "model.hpp"
#include "observables.hpp"
#include "qspace.hpp"
#include "sweep.hpp"
#include "version.hpp"
