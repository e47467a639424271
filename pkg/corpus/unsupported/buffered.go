// Uses a buffered channel, which is outside the supported subset.
// Expected: unsupported
package main

func main() {
	ch := make(chan int, 3)
	ch <- 1
}
