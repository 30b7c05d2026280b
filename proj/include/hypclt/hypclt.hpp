#pragma once

#include "hypclt/errors.hpp"
#include "hypclt/linalg.hpp"
#include "hypclt/word.hpp"
#include "hypclt/digraph.hpp"
#include "hypclt/group.hpp"
#include "hypclt/combing.hpp"
#include "hypclt/fixtures.hpp"
#include "hypclt/combable.hpp"
#include "hypclt/quasimorphism.hpp"
#include "hypclt/spectral.hpp"
#include "hypclt/clt.hpp"
#include "hypclt/io.hpp"
