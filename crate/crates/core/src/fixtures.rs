//! A small corpus of presentations used by tests, benchmarks and the CLI.

use crate::families::{builtin_template, instantiate_torus_cover, seifert, surface};
use crate::presentation::Presentation;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub presentation: Presentation,
    /// The group is known to have no elements of order 2, so the torsion
    /// floor applies to it and to all of its subgroups.
    pub no_two_torsion: bool,
}

fn parsed(name: &'static str, text: &str, no_two_torsion: bool) -> Fixture {
    Fixture {
        name,
        presentation: Presentation::parse(text).expect("fixture parses"),
        no_two_torsion,
    }
}

/// Every fixture, in a fixed order.
pub fn corpus() -> Vec<Fixture> {
    let torus_base = |name| {
        instantiate_torus_cover(&builtin_template(name).expect("builtin"), 1, 1)
            .expect("(1,1) instance")
            .presentation
    };
    vec![
        Fixture {
            name: "surface2",
            presentation: surface(2).expect("g = 2").presentation,
            no_two_torsion: true,
        },
        Fixture {
            name: "seifert_1_3",
            presentation: seifert(1, 3).expect("g = 1").presentation,
            no_two_torsion: true,
        },
        Fixture {
            name: "figure8_base",
            presentation: torus_base("figure8"),
            no_two_torsion: true,
        },
        parsed("cyclic6", "< x | x^6 >", false),
        parsed("s3", "< a, b | a^2, b^2, (a b)^3 >", false),
        parsed("free1", "< x | >", true),
        parsed("free2", "< a, b | >", true),
        parsed("cyclic9", "< x | x^9 >", true),
        Fixture {
            name: "torus",
            presentation: surface(1).expect("g = 1").presentation,
            no_two_torsion: true,
        },
        parsed("cyclic5", "< x | x^5 >", true),
        Fixture {
            name: "magic_base",
            presentation: torus_base("magic"),
            no_two_torsion: true,
        },
        parsed("trefoil", "< a, b | a^2 b^-3 >", true),
        parsed("z3_free_z3", "< a, b | a^3, b^3 >", true),
    ]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    corpus().into_iter().find(|f| f.name == name)
}
