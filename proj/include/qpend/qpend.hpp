#pragma once

#include "qpend/angular.hpp"
#include "qpend/blocks.hpp"
#include "qpend/classify.hpp"
#include "qpend/config.hpp"
#include "qpend/errors.hpp"
#include "qpend/exact.hpp"
#include "qpend/halfint.hpp"
#include "qpend/hyper.hpp"
#include "qpend/io.hpp"
#include "qpend/sectors.hpp"
#include "qpend/trig.hpp"
#include "qpend/util.hpp"
#include "qpend/verify.hpp"
#include "qpend/wavefunction.hpp"
