mod evolve;
mod export;
mod fit;
mod spectrum;
mod tomo;
mod winding;

pub use evolve::run as evolve;
pub use export::run as export;
pub use fit::run as fit;
pub use spectrum::run as spectrum;
pub use tomo::run as tomo;
pub use winding::run as winding;

use serde::Serialize;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
