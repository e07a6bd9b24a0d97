#include "enaqt/integrator.hpp"
