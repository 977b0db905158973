//! Small fixtures shared by unit tests, integration tests and benches.

use crate::triangulation::Triangulation;

pub const K4_TRI: &str = "n 4\nouter 0 1 2\nrot 0: 1 3 2\nrot 1: 2 3 0\nrot 2: 0 3 1\nrot 3: 2 0 1\n";

pub const F5_TRI: &str = "n 5\nouter 0 1 2\nrot 0: 1 4 3 2\nrot 1: 2 3 4 0\nrot 2: 0 3 1\nrot 3: 2 0 4 1\nrot 4: 3 0 1\n";

/// The complete graph on four vertices with 3 inside the triangle 0 1 2.
pub fn k4() -> Triangulation {
    K4_TRI.parse().expect("fixture parses")
}

/// Five vertices: 3 and 4 both adjacent to 0 and 1, with 4 nested below 3.
pub fn f5() -> Triangulation {
    F5_TRI.parse().expect("fixture parses")
}
