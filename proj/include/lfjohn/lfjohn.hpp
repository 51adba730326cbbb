#pragma once

#include "lfjohn/core.hpp"
#include "lfjohn/lightfield.hpp"
#include "lfjohn/synth.hpp"
#include "lfjohn/residuals.hpp"
#include "lfjohn/asgeirsson.hpp"
#include "lfjohn/resample.hpp"
#include "lfjohn/io.hpp"
