use freeknot_core::tangle::{make_21n, make_2n, make_foil};
use freeknot_core::enumerate::{jones_tally, percent_string};
use freeknot_cli::verify::family_key;
use freeknot_core::polynomial::LaurentPoly;
use freeknot_cli::tablegen::enumerate_shadows;

fn main() {
    let k31 = family_key(&make_foil(3).unwrap());
    let k41 = family_key(&make_2n(2).unwrap());
    let d = make_21n(3).unwrap();
    let tally = jones_tally(&d);
    let n = d.crossing_count();
    let get = |k: &LaurentPoly| tally.get(k).copied().unwrap_or(0);
    println!("21n(3): n={n} unknot={} ({}) tre={} ({}) fig8={} ({})",
        get(&LaurentPoly::one()), percent_string(get(&LaurentPoly::one()), n),
        get(&k31), percent_string(get(&k31), n),
        get(&k41), percent_string(get(&k41), n));
    for n in [5usize, 6] {
        let shadows = enumerate_shadows(n);
        println!("n={n}: {} shadows", shadows.len());
        for s in &shadows {
            let t = jones_tally(&s);
            let g = |k: &LaurentPoly| t.get(k).copied().unwrap_or(0);
            println!("  {} -> u={} t={} f={}", s.encode(), g(&LaurentPoly::one()), g(&k31), g(&k41));
        }
    }
}
