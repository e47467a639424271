// Pattern P1 (basic): compute two sums, send and receive the results in
// two channels.
// Expected: no deadlock
package main

import "fmt"

func sum(x int, y int, ch chan int) {
	ch <- x + y
}

func main() {
	ch1 := make(chan int)
	ch2 := make(chan int)
	go sum(1, 2, ch1)
	go sum(3, 4, ch2)
	fmt.Println(<-ch1, <-ch2)
}
