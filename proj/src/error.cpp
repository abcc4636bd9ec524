#include "meshscore/error.hpp"
