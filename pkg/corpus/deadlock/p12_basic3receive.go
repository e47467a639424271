// Pattern P12 (basic3receive): main attempts to receive more data than
// is ever sent.
// Expected: deadlock
package main

import "fmt"

func send2(ch chan int) {
	ch <- 1
	ch <- 2
}

func main() {
	ch := make(chan int)
	go send2(ch)
	fmt.Println(<-ch)
	fmt.Println(<-ch)
	fmt.Println(<-ch)
}
