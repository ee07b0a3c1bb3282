//! Write the standard example categories and functors as JSON files, for
//! driving the CLI by hand.
//!
//!     cargo run -p tcat-core --example dump_standard -- fixtures/

use std::fs;
use std::path::PathBuf;

use tcat_core::cat::monotone_to_functor;
use tcat_core::cat::Preorder;
use tcat_core::finset::{FinMap, FinSet};
use tcat_core::json::{category_to_string, functor_to_string};
use tcat_core::standard;

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "fixtures".to_string())
        .into();
    fs::create_dir_all(&dir).expect("create output directory");

    let categories = [
        ("walking_arrow.json", standard::walking_arrow()),
        ("chain3.json", standard::chain3()),
        ("parallel_pair.json", standard::parallel_pair()),
        ("monoid_z2.json", standard::monoid_z2()),
        ("mulcat_nullary.json", standard::mulcat_m()),
        ("mulcat_binary.json", standard::mulcat_binary()),
    ];
    for (name, cat) in categories {
        fs::write(dir.join(name), category_to_string(&cat)).unwrap();
    }

    let chain = Preorder::generated(
        FinSet::new("chain2", ["a", "b"]).unwrap(),
        [("a", "b")],
    )
    .unwrap();
    let pt = Preorder::generated(FinSet::singleton("pt", "*"), []).unwrap();
    let collapse = FinMap::constant(chain.set().clone(), pt.set().clone(), "*").unwrap();
    let functors = [
        ("exampleF.json", standard::example_f()),
        ("exampleM.json", standard::example_m()),
        (
            "chain_to_point.json",
            monotone_to_functor(&chain, &pt, &collapse).unwrap(),
        ),
    ];
    for (name, f) in functors {
        fs::write(dir.join(name), functor_to_string(&f)).unwrap();
    }

    println!("wrote fixtures into {}", dir.display());
}
