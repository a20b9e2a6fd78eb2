#include "support/concrete_interp.hpp"
