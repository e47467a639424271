// Pattern P15 (NoLiveGoroutines): a NoSender variant with two goroutines;
// after the only value is delivered everyone is asleep.
// Expected: deadlock
package main

import "fmt"

func wait(ch chan int) {
	fmt.Println(<-ch)
}

func main() {
	ch := make(chan int)
	go wait(ch)
	go wait(ch)
	ch <- 1
	fmt.Println(<-ch)
}
