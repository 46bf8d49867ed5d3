use orbitint::ratmap::MapSystem;
use orbitint::words::{enumerate_words, Word, WordSampler};

fn main() -> orbitint::Result<()> {
    let system: MapSystem = "z^2; z^3".parse()?;
    let w = Word::periodic(vec![1, 2, 2])?;
    println!("{w}: first seven letters {:?}, shift {}", w.prefix(7).unwrap(), w.shift()?);
    println!("D_5 along {w} = {}", w.degree_product(&system, 5)?);

    let all: Vec<String> = enumerate_words(system.k(), 3).iter().map(ToString::to_string).collect();
    println!("words of length 3: {}", all.join(" "));

    // letters drawn with probability proportional to degree
    let mut sampler = WordSampler::new(&system, 42);
    println!("sampled: {}", sampler.word(20));
    Ok(())
}
