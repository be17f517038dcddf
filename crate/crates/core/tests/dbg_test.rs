#[test]
fn dbg_quarter_turn() {
    use grlie::autmap::GroupMap;
    use grlie::builtin::suzuki_generator;
    use grlie::lie::SurfaceAlgebra;
    use grlie::surface::SurfacePresentation;
    use grlie::word::Word;
    use grlie::magnus::{magnus_expand, depth_of_expansion, Depth};

    let pres = SurfacePresentation::new(2, 0).unwrap();
    let alg = SurfaceAlgebra::new(pres.clone()).unwrap();
    let a0 = suzuki_generator(&pres, 0).unwrap();
    let mut psi = GroupMap::identity(pres.clone());
    for _ in 0..4 { psi = psi.compose(&a0).unwrap(); }
    // expected: psi = inner(b^-1 a^-1 b a)
    let c = Word::from_pairs(&[(2,-1),(0,-1),(2,1),(0,1)]); // b1^-1 a1^-1 b1 a1: b1 index = g + 0 = 2
    let check = GroupMap::inner(pres.clone(), &c);
    println!("psi == inner(c)? {}", psi == check);
    for g in 0..4u16 {
        let x = Word::generator(g);
        let u = psi.apply(&x).mul(&x.inverse());
        println!("gen {}: psi(x)x^-1 = {:?}", g, u);
        if !u.is_identity() {
            let alph = alg.free().alphabet().clone();
            let p = magnus_expand(&alph, &u, 5).unwrap();
            if let Depth::Finite { m, .. } = depth_of_expansion(&p, 5) {
                println!("  free depth {}", m);
                let coords = alg.free().coordinates(m, &p.homogeneous_part(m)).unwrap();
                println!("  free coords {:?}", coords.iter().map(|x| x.to_string()).collect::<Vec<_>>());
                let cd = alg.closed_degree(m).unwrap();
                let q = cd.quotient.project(&coords).unwrap();
                println!("  quotient coords {:?}", q.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            }
        }
    }
}
